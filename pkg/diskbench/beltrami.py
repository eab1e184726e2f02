"""Holomorphic motions generated by Beltrami coefficients supported on the disk.

For |mu| <= 1 on the disk and |lambda| < 1 the principal solution Psi(lambda, .)
of the Beltrami equation with coefficient lambda*mu has, outside the disk,

    d Psi(lambda, zeta) = 1 + sum_n lambda^n T_n(zeta),   T_n = S (M_mu S)^(n-1) mu.

Each T_n is stored as a series F_n with T_n(zeta) = F_n(1/zeta). The motion
H(lambda, zeta) = log d Psi(lambda, zeta) = sum_j lambda^j H_j(zeta) is
continued from lambda = 0 along rays, and G(lambda, z) = H(lambda, 1/z)/lambda.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .conformal import ExteriorMap
from .errors import BranchTrackingError, DomainError
from .grids import angular_count, disk_integral, gauss_legendre_grid, midpoint_grid, next_power_of_two
from .models import (
    CheckResult,
    CircleSamples,
    DiskField,
    MotionSeries,
    PowerSeries,
    RadiiLadder,
    SpectrumBound,
    SpectrumEstimate,
    log_normalizer,
)
from .symbols import DEFAULT_RADIAL_NODES, FieldSymbol, Symbol
from .transforms import beurling_exterior_series, beurling_transform_interior
from .variance import LIMSUP_TAIL, OVERFLOW_EXPONENT, main_bound, tail_slope

logger = logging.getLogger(__name__)

NEUMANN_RADII = 128
NEUMANN_ANGLES = 512
#: Largest |delta lambda| per continuation step of the logarithm.
HOMOTOPY_STEP = 0.05
CONTOUR_RADIUS = 0.5
CONTOUR_POINTS = 64
#: Angle change per step beyond which the branch is considered lost.
BRANCH_ANGLE = math.pi / 2


class NeumannSeries:
    """Terms of the Neumann series for d Psi, built on demand.

    Interior fields f_1 = mu, f_(n+1) = mu * S f_n live on a midpoint grid;
    the exterior values of S f_n are Laurent series from the holomorphic
    moments of f_n. The first term uses exact moments when the symbol has
    them.
    """

    def __init__(self, mu: Symbol, terms: int = 4, n_r: int = NEUMANN_RADII, n_a: int = NEUMANN_ANGLES):
        sup = mu.sup_norm()
        if not sup <= 1.0 + 1e-12:
            raise DomainError(f"Beltrami coefficient must satisfy |mu| <= 1, got {sup:.6g}")
        self.mu = mu
        self.grid = midpoint_grid(n_r, n_a)
        self.J = n_a // 2 - 1
        self._mu_values = mu.sample(self.grid).values
        self.fields: List[DiskField] = [DiskField(self.grid, self._mu_values)]
        if mu.exact_holomorphic_moments(self.J) is not None:
            first = beurling_exterior_series(mu, self.J)
        else:
            first = beurling_exterior_series(mu, self.J, gauss_legendre_grid(DEFAULT_RADIAL_NODES, n_a))
        self.exterior: List[PowerSeries] = [first]
        self.norms: List[float] = [self._l2(self.fields[0])]
        self.ensure(terms)

    @staticmethod
    def _l2(field: DiskField) -> float:
        return math.sqrt(max(disk_integral(DiskField(field.grid, np.abs(field.values) ** 2)).real, 0.0))

    def __len__(self) -> int:
        return len(self.exterior)

    def ensure(self, terms: int) -> "NeumannSeries":
        while len(self.exterior) < terms:
            inner = beurling_transform_interior(self.fields[-1])
            field = DiskField(self.grid, self._mu_values * inner.values)
            n = len(self.exterior) + 1
            symbol = FieldSymbol(field, name=f"f{n}[{self.mu.name}]")
            self.fields.append(field)
            self.exterior.append(beurling_exterior_series(symbol, self.J, self.grid))
            self.norms.append(self._l2(field))
            logger.debug("Neumann term %d of %s: L2 norm %.3e", n, self.mu.name, self.norms[-1])
        return self

    def values(self, z, terms: Optional[int] = None) -> np.ndarray:
        """F_n(z) for n = 1..terms, shape (terms,) + z.shape."""
        terms = len(self) if terms is None else terms
        self.ensure(terms)
        z = np.asarray(z, dtype=complex)
        return np.stack([F(z) for F in self.exterior[:terms]])

    def on_circle(self, r: float, n: int, terms: Optional[int] = None) -> np.ndarray:
        """F_n at r exp(2 pi i k/n), which is T_n at (1/r) exp(-2 pi i k/n)."""
        terms = len(self) if terms is None else terms
        self.ensure(terms)
        return np.stack([F.on_circle(r, n) for F in self.exterior[:terms]])

    def tail_estimate(self, lam: complex) -> float:
        return abs(lam) ** len(self) * self.norms[-1]


SeriesLike = Union[Symbol, NeumannSeries]


def _as_series(mu: SeriesLike, terms: int) -> NeumannSeries:
    series = mu if isinstance(mu, NeumannSeries) else NeumannSeries(mu, terms)
    return series.ensure(terms)


def _derivative_from_terms(terms: np.ndarray, lam: complex) -> np.ndarray:
    powers = lam ** np.arange(1, terms.shape[0] + 1)
    return 1.0 + np.tensordot(powers, terms, axes=1)


def _continued_log(terms: np.ndarray, lam: complex, step: float = HOMOTOPY_STEP) -> np.ndarray:
    """log(1 + sum_n lam^n F_n) continued from lam = 0 along the ray.

    Raises:
        BranchTrackingError: If a step turns the argument by more than pi/2
    """
    steps = max(1, int(math.ceil(abs(lam) / step)))
    prev = np.ones(terms.shape[1:], dtype=complex)
    out = np.zeros(terms.shape[1:], dtype=complex)
    for i in range(1, steps + 1):
        current = _derivative_from_terms(terms, lam * i / steps)
        if np.any(current == 0):
            raise BranchTrackingError(f"derivative vanishes at lambda={lam * i / steps:.4g}")
        ratio = current / prev
        turn = np.angle(ratio)
        if np.any(np.abs(turn) > BRANCH_ANGLE):
            raise BranchTrackingError(f"argument jumps by {float(np.max(np.abs(turn))):.3g} at lambda={lam:.4g}")
        out += np.log(ratio)
        prev = current
    return out


def neumann_derivative(mu: SeriesLike, lam: complex, zeta, J: int = 4) -> np.ndarray:
    """d Psi(lambda, zeta) from the first J Neumann terms, for |zeta| > 1.

    Raises:
        DomainError: If |lambda| >= 1, J < 1 or some |zeta| <= 1
    """
    if abs(lam) >= 1:
        raise DomainError(f"motion parameter must lie in the disk, got {lam}")
    if J < 1:
        raise DomainError("the Neumann series needs at least one term")
    zeta = np.asarray(zeta, dtype=complex)
    if np.any(np.abs(zeta) <= 1.0):
        raise DomainError("interior evaluation not supported by this identity")
    series = _as_series(mu, J)
    norms = series.norms[:J]
    if J >= 2 and norms[-2] > 0 and abs(lam) * norms[-1] >= norms[-2]:
        logger.warning("Neumann terms not decaying at |lambda|=%.3g, tail estimate %.3e",
                       abs(lam), abs(lam) ** J * norms[-1])
    value = _derivative_from_terms(series.values(1.0 / zeta, J), lam)
    return complex(value) if value.ndim == 0 else value


def motion_coefficients(mu: SeriesLike, R: float, J: int, n: Optional[int] = None,
                        lam0: float = CONTOUR_RADIUS, M: Optional[int] = None) -> MotionSeries:
    """H_1..H_J of log d Psi on |zeta| = R by a contour FFT over |lambda| = lam0.

    H_(J+1) is computed too and reported as the tail magnitude.

    Raises:
        DomainError: If R <= 1
        BranchTrackingError: If the logarithm cannot be continued
    """
    if not R > 1:
        raise DomainError(f"motion coefficients need R > 1, got {R}")
    if J < 1:
        raise DomainError("at least one motion coefficient is needed")
    series = _as_series(mu, J + 1)
    n = angular_count(1.0 / R, series.J + 2) if n is None else n
    M = max(CONTOUR_POINTS, next_power_of_two(4 * (J + 2))) if M is None else M
    # reorder so sample k sits at R exp(2 pi i k/n)
    terms = series.on_circle(1.0 / R, n, J + 1)[:, (-np.arange(n)) % n]
    lams = lam0 * np.exp(2j * np.pi * np.arange(M) / M)
    logs = np.stack([_continued_log(terms, lam) for lam in lams])
    bins = np.fft.fft(logs, axis=0) / M
    coefficients = [CircleSamples(R, bins[j] / lam0 ** j) for j in range(1, J + 1)]
    tail = float(np.max(np.abs(bins[J + 1]))) / lam0 ** (J + 1)
    return MotionSeries(R, coefficients, tail, lam0)


def closed_form_coefficients(mu: SeriesLike, R: float, n: int) -> Tuple[CircleSamples, CircleSamples]:
    """H_1 = S mu and H_2 = S M_mu S mu - (S mu)^2/2 on |zeta| = R."""
    series = _as_series(mu, 2)
    terms = series.on_circle(1.0 / R, n, 2)[:, (-np.arange(n)) % n]
    return CircleSamples(R, terms[0]), CircleSamples(R, terms[1] - 0.5 * terms[0] ** 2)


def _check_interior(z: np.ndarray):
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("G(lambda, z) is defined for |z| < 1")


def G_lambda(mu: SeriesLike, lam: complex, z, J: int = 4):
    """G(lambda, z) = H(lambda, 1/z)/lambda, with G(0, z) = S mu(1/z)."""
    z = np.asarray(z, dtype=complex)
    _check_interior(z)
    series = _as_series(mu, J)
    terms = series.values(z, J)
    if lam == 0:
        value = terms[0]
    else:
        value = _continued_log(terms, complex(lam)) / lam
    return complex(value) if value.ndim == 0 else value


def G_lambda_derivative(mu: SeriesLike, lam: complex, z, J: int = 4):
    """d G/dz = sum lambda^(n-1) F_n'(z) / (1 + sum lambda^n F_n(z))."""
    z = np.asarray(z, dtype=complex)
    _check_interior(z)
    series = _as_series(mu, J)
    slopes = np.stack([F.derivative()(z) for F in series.exterior[:J]])
    if lam == 0:
        value = slopes[0]
    else:
        powers = lam ** np.arange(J)
        value = np.tensordot(powers, slopes, axes=1) / _derivative_from_terms(series.values(z, J), lam)
    return complex(value) if value.ndim == 0 else value


def _default_points() -> np.ndarray:
    radii = np.linspace(0.1, 0.9, 9)
    theta = 2.0 * np.pi * np.arange(64) / 64
    return (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()


def goluzin_derived_bounds_check(mu: SeriesLike, lam: complex, points: Optional[Sequence[complex]] = None,
                                 J: int = 4, tol: float = 1e-6) -> CheckResult:
    """|G(lambda, z)| <= log(1/(1-|z|^2)) and (1-|z|^2)|dG/dz| <= 6|z|."""
    z = _default_points() if points is None else np.asarray(points, dtype=complex)
    series = _as_series(mu, J)
    growth = np.abs(G_lambda(series, lam, z, J)) + np.log1p(-np.abs(z) ** 2)
    slope = (1.0 - np.abs(z) ** 2) * np.abs(G_lambda_derivative(series, lam, z, J)) - 6.0 * np.abs(z)
    lhs = float(max(np.max(growth), np.max(slope)))
    return CheckResult("motion distortion bounds", "growth and derivative of G(lambda, z)",
                       lhs, 0.0, lhs <= tol, f"lambda={lam}",
                       extra={"growth_excess": float(np.max(growth)), "derivative_excess": float(np.max(slope))})


class MotionMap(ExteriorMap):
    """Psi(lambda, .) outside the disk, normalized as zeta + O(1/zeta)."""

    def __init__(self, mu: SeriesLike, lam: complex, J: int = 4):
        if abs(lam) >= 1:
            raise DomainError(f"motion parameter must lie in the disk, got {lam}")
        self.series = _as_series(mu, J)
        self.lam = complex(lam)
        self.J = J
        self.name = f"Psi[{self.series.mu.name}, {lam}]"
        # Psi = zeta + sum lambda^n A_n(1/zeta), A_n'(w) w^2 = -F_n(w)
        self._primitives = []
        for F in self.series.exterior[:J]:
            k = np.arange(2, F.coeffs.size)
            coeffs = np.zeros(F.coeffs.size - 1, dtype=complex)
            coeffs[k - 1] = F.coeffs[k] / (1.0 - k)
            self._primitives.append(PowerSeries(coeffs))

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        w = 1.0 / zeta
        return zeta + sum(self.lam ** n * A(w) for n, A in enumerate(self._primitives, start=1))

    def h(self, zeta):
        w = 1.0 / np.asarray(zeta, dtype=complex)
        return _continued_log(self.series.values(w, self.J), self.lam)

    def dh(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        w = 1.0 / zeta
        second = sum(self.lam ** n * F.derivative()(w) for n, F in enumerate(self.series.exterior[:self.J], start=1))
        return -w * w * second / _derivative_from_terms(self.series.values(w, self.J), self.lam)


def bk_bound(k: float, t: complex) -> SpectrumBound:
    """B(k, t) <= k^2 |t|^2 (1+7k)^2 / 4, improved to k|t| - (1+7k)^-2 once
    |t| >= 2/(k (1+7k)^2); the branches agree at the splice.

    Raises:
        DomainError: If k is not in (0, 1)
    """
    if not 0.0 < k < 1.0:
        raise DomainError(f"k must lie in (0, 1), got {k}")
    s = abs(t)
    c = (1.0 + 7.0 * k) ** 2
    if s >= 2.0 / (k * c):
        return SpectrumBound(k, complex(t), k * s - 1.0 / c, "linear")
    return SpectrumBound(k, complex(t), 0.25 * k * k * s * s * c, "quadratic")


def prause_smirnov_bound(k: float, t: float) -> float:
    """k^2 t^2/4, the comparison line for real t."""
    return 0.25 * k * k * t * t


def prause_smirnov_threshold(k: float) -> float:
    """2/(1 + sqrt(1 - k^2))."""
    if not 0.0 <= k < 1.0:
        raise DomainError(f"k must lie in [0, 1), got {k}")
    return 2.0 / (1.0 + math.sqrt(1.0 - k * k))


def _mean_exp(exponent: np.ndarray) -> Tuple[float, bool]:
    over = bool(np.any(exponent > OVERFLOW_EXPONENT))
    return float(np.mean(np.exp(np.minimum(exponent, OVERFLOW_EXPONENT)))), over


def plancherel_average_check(motion: MotionSeries, a: float, rho: float = 1.0,
                             M: Optional[int] = None) -> CheckResult:
    """int exp(a sum_j |H_j|^2 rho^(2j)/L) ds <= max_lambda int exp(a |H(lambda)|^2/L) ds.

    lambda runs over M equispaced points of |lambda| = rho with M > 2J, where
    the discrete Plancherel identity is exact for the truncated motion. For
    rho < 1 the allowance covers the neglected terms, bounded by
    delta = tail rho^(J+1)/(1 - rho).
    """
    if not 0.0 < a < 1.0:
        raise DomainError(f"a must lie in (0, 1), got {a}")
    if not 0.0 < rho <= 1.0:
        raise DomainError(f"sample radius must lie in (0, 1], got {rho}")
    R, J = motion.R, motion.J
    L = log_normalizer(1.0 / R)
    M = next_power_of_two(2 * J + 2) if M is None else M
    energy = sum(np.abs(motion.coefficient(j).values) ** 2 * rho ** (2 * j) for j in range(1, J + 1))
    lhs, over_l = _mean_exp(a * energy / L)
    rhs, h_max, over_r = 0.0, 0.0, False
    for lam in rho * np.exp(2j * np.pi * np.arange(M) / M):
        values = motion.evaluate(lam)
        value, over = _mean_exp(a * np.abs(values) ** 2 / L)
        rhs, over_r = max(rhs, value), over_r or over
        h_max = max(h_max, float(np.max(np.abs(values))))
    if rho < 1.0:
        delta = motion.tail_magnitude * rho ** (J + 1) / (1.0 - rho)
        allowance = rhs * math.expm1(min(a * (2.0 * h_max * delta + delta * delta) / L, OVERFLOW_EXPONENT))
    else:
        allowance = 0.0
    passed = lhs <= (rhs + allowance) * (1.0 + 1e-12)
    detail = "overflow" if (over_l or over_r) else f"R={R} J={J} rho={rho}"
    return CheckResult("Plancherel averaging", "coefficient energy against the lambda supremum",
                       lhs, rhs, passed, detail, extra={"allowance": allowance})


def beurling_form_check(mu: SeriesLike, a: float, R: float, n: Optional[int] = None) -> CheckResult:
    """int exp(a |S mu(R zeta)|^2 / log(R^2/(R^2-1))) ds <= 10 (1-a)^(-3/2)."""
    if not R > 1:
        raise DomainError(f"Beurling form needs R > 1, got {R}")
    series = _as_series(mu, 1)
    r = 1.0 / R
    n = angular_count(r, series.J + 2) if n is None else n
    values = series.on_circle(r, n, 1)[0]
    lhs, over = _mean_exp(a * np.abs(values) ** 2 / log_normalizer(r))
    rhs = main_bound(a)
    return CheckResult("Beurling form", "tail integral of S mu outside the disk",
                       lhs, rhs, lhs <= rhs, "overflow" if over else f"a={a} R={R}")


def exterior_type_spectrum(mu: SeriesLike, lam: complex, t: complex, ladder: RadiiLadder,
                           J: int = 4, tail: int = LIMSUP_TAIL) -> Tuple[SpectrumEstimate, SpectrumBound]:
    """Growth exponent of int |exp(t H(lambda, R zeta))| ds against
    log(R^2/(R^2-1)) for R = 1/r over the ladder tail, next to B(|lambda|, t).

    The Laurent tails are truncated at the series degree, so the ladder
    should stop well before r^J becomes comparable to the coefficients.
    """
    series = _as_series(mu, J)
    L, values, dropped = [], [], 0
    for r in ladder.tail(tail):
        n = angular_count(r, series.J + 2)
        H = _continued_log(series.on_circle(r, n, J), complex(lam))
        value, over = _mean_exp(np.real(complex(t) * H))
        if over:
            dropped += 1
            continue
        L.append(log_normalizer(r))
        values.append(value)
    if len(values) < 2:
        raise DomainError("not enough finite samples for a spectrum fit")
    slope, rms = tail_slope(np.array(L), np.array(values))
    estimate = SpectrumEstimate(complex(t), slope, rms, len(values), dropped)
    return estimate, bk_bound(abs(lam), t)


def bk_splice_check(k: float, tol: float = 1e-12) -> CheckResult:
    """Quadratic and linear branches of B(k, t) agree at |t| = 2/(k (1+7k)^2)."""
    if not 0.0 < k < 1.0:
        raise DomainError(f"k must lie in (0, 1), got {k}")
    c = (1.0 + 7.0 * k) ** 2
    s = 2.0 / (k * c)
    quadratic = 0.25 * k * k * s * s * c
    linear = k * s - 1.0 / c
    return CheckResult("B(k, t) splice", "quadratic and linear branches meet",
                       quadratic, linear, abs(quadratic - linear) <= tol, f"k={k}")
