"""The extremal symbol mu0(w) = (1 - conj(w))/(1 - w) and its projection.

P mu0(z) = (1/z^2) log(1/(1-z)) - 1/z = sum_j z^j/(j+2), so the tail integral
of P mu0 grows without bound once a > 1.
"""

import logging
from typing import Sequence

import numpy as np

from .errors import DomainError
from .models import CheckResult, ClosedFormFunction, PowerSeries, RadiiLadder
from .symbols import Symbol
from .variance import tail_integral_sweep, tail_integral

logger = logging.getLogger(__name__)

#: Below this modulus the closed forms are replaced by their Taylor series.
SERIES_RADIUS = 0.05
SERIES_TERMS = 20


class ExtremalSymbol(Symbol):
    """mu0(w) = (1 - conj(w))/(1 - w), unimodular on the disk."""

    name = "mu0"

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        return (1.0 - np.conj(w)) / (1.0 - w)

    def sup_norm(self) -> float:
        return 1.0

    def exact_antiholomorphic_moments(self, J: int) -> np.ndarray:
        j = np.arange(J + 1, dtype=float)
        return 1.0 / ((j + 1.0) * (j + 2.0)) + 0j

    def exact_holomorphic_moments(self, J: int) -> np.ndarray:
        out = np.zeros(J + 1, dtype=complex)
        out[0] = 0.5
        if J >= 1:
            out[1] = -0.5
        return out

    def projection(self) -> ClosedFormFunction:
        return mu0_function()


def _check_disk(z: np.ndarray):
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("the extremal projection is defined on the open disk only")


def _series_values(z: np.ndarray, offset: int, derivative: bool = False) -> np.ndarray:
    j = np.arange(SERIES_TERMS)
    coeffs = 1.0 / (j + offset)
    if derivative:
        coeffs = (coeffs * j)[1:]
    return np.polynomial.polynomial.polyval(z, coeffs)


def mu0_projection(z):
    """Closed form of P mu0, with the removable singularity at 0 filled by 1/2.

    Raises:
        DomainError: If |z| >= 1
    """
    z = np.asarray(z, dtype=complex)
    _check_disk(z)
    small = np.abs(z) < SERIES_RADIUS
    safe = np.where(small, 0.5, z)
    value = np.where(small, _series_values(z, 2), -np.log1p(-safe) / safe ** 2 - 1.0 / safe)
    return complex(value) if value.ndim == 0 else value


def mu0_projection_derivative(z):
    z = np.asarray(z, dtype=complex)
    _check_disk(z)
    small = np.abs(z) < SERIES_RADIUS
    safe = np.where(small, 0.5, z)
    closed = (2.0 * np.log1p(-safe) / safe ** 3 + 1.0 / (safe ** 2 * (1.0 - safe))
              + 1.0 / safe ** 2)
    value = np.where(small, _series_values(z, 2, derivative=True), closed)
    return complex(value) if value.ndim == 0 else value


def _mu0_series(degree: int) -> PowerSeries:
    j = np.arange(degree + 1)
    return PowerSeries(1.0 / (j + 2.0), name="P[mu0]")


def mu0_function() -> ClosedFormFunction:
    """P mu0 as an evaluable holomorphic function."""
    return ClosedFormFunction(mu0_projection, mu0_projection_derivative,
                              name="P[mu0]", series=_mu0_series)


def mu0_exponent() -> ClosedFormFunction:
    """z^2 P mu0(z) = log(1/(1-z)) - z, whose exponential is e^(-z)/(1-z)."""

    def series(degree: int) -> PowerSeries:
        j = np.arange(2, degree + 1)
        return PowerSeries(np.concatenate(([0.0, 0.0], 1.0 / j)), name="z^2 P[mu0]")

    return ClosedFormFunction(
        lambda z: -np.log1p(-z) - z, lambda z: z / (1.0 - z),
        name="z^2 P[mu0]", series=series,
    )


def lower_bound(a: float, r: float) -> float:
    """e^-2 (1 - r^2)^(-(a-1)/a)."""
    if a <= 0:
        raise DomainError(f"a must be positive, got {a}")
    if not 0.0 < r < 1.0:
        raise DomainError(f"radius must lie in (0, 1), got {r}")
    return float(np.exp(-2.0) * (1.0 - r * r) ** (-(a - 1.0) / a))


def lower_bound_check(a: float, r: float) -> CheckResult:
    """I_(P mu0)(a, r) >= e^-2 (1 - r^2)^(-(a-1)/a)."""
    rhs = lower_bound(a, r)
    lhs = tail_integral(mu0_function(), a, r)
    return CheckResult("extremal lower bound", "tail integral of the extremal projection from below",
                       lhs, rhs, lhs >= rhs, f"a={a} r={r}")


def exponential_identity_check(points: Sequence[complex], rtol: float = 1e-12) -> CheckResult:
    """exp(z^2 P mu0(z)) = e^(-z)/(1 - z) on the given points."""
    z = np.asarray(points, dtype=complex)
    lhs = np.exp(z ** 2 * mu0_projection(z))
    rhs = np.exp(-z) / (1.0 - z)
    err = np.abs(lhs - rhs) / np.abs(rhs)
    worst = int(np.argmax(err))
    return CheckResult("exponential identity", "exp of z^2 P mu0",
                       complex(lhs.flat[worst]), complex(rhs.flat[worst]),
                       bool(np.all(err <= rtol)), f"max relative error {float(err.max()):.3g}")


def near_maximal_growth_check(xs: Sequence[float]) -> CheckResult:
    """P mu0(x) >= (1/x^2) log(1/(1-x^2)) - 1/2 for real x in (0, 1)."""
    x = np.asarray(xs, dtype=float)
    if np.any((x <= 0) | (x >= 1)):
        raise DomainError("growth check needs x in (0, 1)")
    lhs = np.real(mu0_projection(x))
    rhs = -np.log1p(-x * x) / (x * x) - 0.5
    worst = int(np.argmin(lhs - rhs))
    return CheckResult("near-maximal growth", "extremal projection grows almost maximally",
                       float(lhs[worst]), float(rhs[worst]), bool(np.all(lhs >= rhs)))


def ladder_growth(a: float, ladder: RadiiLadder, count: int = 6) -> CheckResult:
    """Monotone growth of I_(P mu0)(a, r) over the last ``count`` ladder radii."""
    table = tail_integral_sweep(mu0_function(), [a], ladder)
    values = table.values_for(float(a))[-count:]
    increasing = bool(np.all(np.diff(values) > 0))
    return CheckResult("unbounded growth", "no uniform bound beyond a = 1",
                       float(values[0]), float(values[-1]), increasing, f"a={a}",
                       extra={"values": values.tolist()})
