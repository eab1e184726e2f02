"""Bloch seminorm, the piecewise weight omega and the decomposition
g = z^2 P(nu_g) + G of a Bloch function.
"""

import logging
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError
from .grids import angular_count, circle_values, composite_gauss_grid, field_moments
from .models import (
    BlochFunction,
    CheckResult,
    Decomposition,
    DiskField,
    HolomorphicFunction,
    PowerSeries,
)

logger = logging.getLogger(__name__)

#: Rings per halving of the distance 1 - r in the seminorm search grid.
RINGS_PER_OCTAVE = 4
#: Number of halvings of 1 - r covered by the seminorm search grid.
OCTAVES = 12
#: Cap on samples per ring during the seminorm search.
MAX_RING_ANGLES = 1 << 14


def seminorm_radii(octaves: int = OCTAVES, per_octave: int = RINGS_PER_OCTAVE) -> np.ndarray:
    """Search radii {0} and 1 - 2^(-k/q), accumulating at the boundary."""
    k = np.arange(1, octaves * per_octave + 1)
    return np.concatenate(([0.0], 1.0 - 2.0 ** (-k / per_octave)))


def _degree(g: HolomorphicFunction) -> Optional[int]:
    return g.degree if isinstance(g, PowerSeries) else None


def bloch_seminorm(
    g: HolomorphicFunction,
    octaves: int = OCTAVES,
    per_octave: int = RINGS_PER_OCTAVE,
    polish: bool = True,
) -> float:
    """Estimate sup (1 - |z|^2) |g'(z)| over the disk.

    The supremum is taken over rings accumulating at the unit circle and the
    best node is refined with a Nelder-Mead search in (r, theta). The result
    never decreases when the ring grid is refined.
    """
    dg = g.derivative()
    degree = _degree(dg)
    best, best_r, best_theta = 0.0, 0.0, 0.0
    for r in seminorm_radii(octaves, per_octave):
        n = min(angular_count(r, degree), MAX_RING_ANGLES)
        weighted = (1.0 - r * r) * np.abs(circle_values(dg, r, n))
        j = int(np.argmax(weighted))
        if weighted[j] > best:
            best, best_r, best_theta = float(weighted[j]), r, 2.0 * np.pi * j / n
    if not polish:
        return best

    def objective(x):
        r, theta = x
        if not 0.0 <= r < 1.0:
            return 0.0
        z = r * np.exp(1j * theta)
        return -float((1.0 - r * r) * np.abs(dg(z)))

    result = optimize.minimize(
        objective, x0=[best_r, best_theta], method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 2000},
    )
    polished = -float(result.fun)
    logger.debug("Bloch seminorm grid %.15g polished %.15g", best, polished)
    return max(best, polished)


def bloch_function(g: PowerSeries) -> BlochFunction:
    return BlochFunction(g, bloch_seminorm(g))


def omega_weight(t):
    """1/3 on [0, 1/2) and t/(2 - t^2) on [1/2, 1).

    Raises:
        DomainError: If any t lies outside [0, 1)
    """
    t = np.asarray(t, dtype=float)
    if np.any((t < 0) | (t >= 1)):
        raise DomainError("omega is defined on [0, 1)")
    value = np.where(t < 0.5, 1.0 / 3.0, t / (2.0 - t * t))
    return float(value) if value.ndim == 0 else value


def _omega_ratio(t):
    """(1 - omega)/omega: 2 on [0, 1/2) and (1-t)(2+t)/t above."""
    t = np.asarray(t, dtype=float)
    return np.where(t < 0.5, 2.0, (1.0 - t) * (2.0 + t) / np.maximum(t, 0.5))


def weighted_moments(J: int) -> np.ndarray:
    """M_k = int_0^1 2 r^(2k+1) (1 - r^2) omega(r) dr for k = 0..J.

    The inner panel is integrated in closed form, the outer one by
    Gauss-Legendre with enough nodes for the polynomial part.
    """
    k = np.arange(J + 1)
    inner = (0.5 ** (2 * k + 2) / (k + 1) - 0.5 ** (2 * k + 4) / (k + 2)) / 3.0
    x, w = np.polynomial.legendre.leggauss(J + 64)
    r = 0.75 + 0.25 * x
    profile = 0.25 * 2.0 * (1.0 - r * r) * omega_weight(r)
    outer = np.array([np.sum(w * profile * r ** (2 * kk + 1)) for kk in k])
    return inner + outer


def _quotient_series(g: PowerSeries) -> PowerSeries:
    """(g'(z) - g'(0))/z = sum_k (k+2) g_(k+2) z^k."""
    if g.degree < 2:
        return PowerSeries([0.0])
    k = np.arange(g.degree - 1)
    return PowerSeries((k + 2.0) * g.coeffs[2:])


def bloch_decompose(g: PowerSeries, n_r: Optional[int] = None, n_a: Optional[int] = None) -> Decomposition:
    """Split a Bloch polynomial as g = z^2 P(nu_g) + G.

    nu_g(z) = (1 - |z|^2) omega(|z|) (g'(z) - g'(0))/z is sampled on a
    two-panel Gauss grid; the quotient is evaluated as a series, so the
    removable singularity at 0 needs no special case. P(nu_g) has the
    coefficients (k+1)(k+2) g_(k+2) M_k. The residual compares them with the
    quadrature moments of the sampled field, summed over k, which bounds the
    reconstruction error on the closed disk.
    """
    q = _quotient_series(g)
    J = q.degree
    moments = weighted_moments(J)
    k = np.arange(J + 1)
    p_nu = (k + 1.0) * (k + 2.0) * g.coeffs[2:] * moments if g.degree >= 2 else np.zeros(1)

    n_r = n_r or max(32, J + 8)
    n_a = n_a or max(64, 1 << (2 * J + 4).bit_length())
    grid = composite_gauss_grid(n_r, n_a)
    rho = grid.radii[:, None]
    values = (1.0 - rho ** 2) * omega_weight(grid.radii)[:, None] * q(grid.points)
    nu = DiskField(grid, values)
    quad = (k + 1.0) * field_moments(nu, J) if g.degree >= 2 else np.zeros(1)
    residual = float(np.sum(np.abs(quad - p_nu)))

    G = g.truncate(max(g.degree, 1))
    if g.degree >= 2:
        G = G - PowerSeries(p_nu).shift(2)
    n_circle = max(256, 16 * (G.degree + 1))
    G_sup = float(np.max(np.abs(G.on_circle(1.0, 1 << (n_circle - 1).bit_length()))))
    return Decomposition(nu, G, residual, nu.sup_norm, G_sup)


def constant5_check(points: Sequence[complex], weight: Callable = omega_weight) -> CheckResult:
    """Largest value over ``points`` of int ((1-omega)/omega) |1 - z conj(w)|^-2 dA(w).

    The angular mean of |1 - z conj(w)|^-2 is 1/(1 - |z|^2 |w|^2), leaving a
    radial integral done with scipy quad, split at the jump of omega.
    """
    if weight is omega_weight:
        ratio = _omega_ratio
    else:
        def ratio(t):
            wt = weight(t)
            return (1.0 - wt) / wt

    values = []
    for z in np.atleast_1d(np.asarray(points, dtype=complex)):
        x2 = abs(z) ** 2

        def integrand(rho):
            return 2.0 * rho * float(ratio(rho)) / (1.0 - x2 * rho * rho)

        total = 0.0
        for a, b in ((0.0, 0.5), (0.5, 1.0)):
            part, _ = integrate.quad(integrand, a, b, epsabs=1e-12, limit=200)
            total += part
        values.append(total)
    worst = float(max(values))
    return CheckResult(
        "weight integral", "weighted projection kernel integral is at most 5",
        worst, 5.0, worst <= 5.0, f"{len(values)} points",
    )


def random_bloch_polynomial(rng: np.random.Generator, degree: int = 24, decay: float = 1.0) -> PowerSeries:
    """Random polynomial with g(0) = 0 normalized to Bloch seminorm one.

    Coefficients j = 1..degree are complex normal divided by j**decay.
    """
    j = np.arange(1, degree + 1)
    c = (rng.standard_normal(degree) + 1j * rng.standard_normal(degree)) / j ** decay
    g = PowerSeries(np.concatenate(([0.0], c)))
    return g * (1.0 / bloch_seminorm(g))


def growth_bound_check(g: HolomorphicFunction, radii: Sequence[float], seminorm: Optional[float] = None,
                       tol: float = 1e-9) -> CheckResult:
    """|g(z)| <= ||g|| (1/2) log((1+|z|)/(1-|z|)) for g with g(0) = 0."""
    seminorm = bloch_seminorm(g) if seminorm is None else seminorm
    worst_ratio, worst = -np.inf, (0.0, 0.0)
    ok = True
    for r in radii:
        n = angular_count(r, _degree(g))
        lhs = float(np.max(np.abs(circle_values(g, r, n))))
        rhs = seminorm * float(np.arctanh(r))
        ok = ok and lhs <= rhs + tol
        if lhs - rhs > worst_ratio:
            worst_ratio, worst = lhs - rhs, (lhs, rhs)
    return CheckResult("growth bound", "Bloch growth estimate", worst[0], worst[1], ok)


def quotient_bound_check(g: PowerSeries, radii: Optional[Sequence[float]] = None,
                         tol: float = 1e-6) -> CheckResult:
    """(1-|z|^2) omega(|z|) |(f(z) - f(0))/z| <= 1 for f = g' with seminorm 1.

    ``g`` is rescaled to unit seminorm first.
    """
    g = g * (1.0 / bloch_seminorm(g))
    q = _quotient_series(g)
    radii = seminorm_radii()[1:] if radii is None else np.asarray(radii)
    lhs = 0.0
    for r in radii:
        n = angular_count(r, q.degree)
        lhs = max(lhs, float((1 - r * r) * omega_weight(r) * np.max(np.abs(q.on_circle(r, n)))))
    return CheckResult("quotient bound", "weighted difference quotient of a Bloch derivative",
                       lhs, 1.0, lhs <= 1.0 + tol)


def decomposition_check(g: PowerSeries, tol: float = 1e-6) -> CheckResult:
    """Norm control of the decomposition: ||nu|| <= ||g|| and
    ||G|| <= |g(0)| + 6 ||g||."""
    seminorm = bloch_seminorm(g)
    dec = bloch_decompose(g)
    ok = dec.nu_sup <= seminorm + tol and dec.G_sup <= abs(g.coeffs[0]) + 6 * seminorm + tol
    return CheckResult(
        "decomposition norms", "bounded part plus smooth remainder",
        dec.G_sup, abs(g.coeffs[0]) + 6 * seminorm, bool(ok),
        f"nu_sup={dec.nu_sup:.6g} seminorm={seminorm:.6g}",
        extra={"nu_sup": dec.nu_sup, "residual": dec.residual},
    )


def derivative_seminorm_check(g: PowerSeries, factor: float = 12.0) -> CheckResult:
    """Empirical check of ||G'||_B <= 12 ||g||_B for the remainder G."""
    seminorm = bloch_seminorm(g)
    dec = bloch_decompose(g)
    lhs = bloch_seminorm(dec.G.derivative())
    return CheckResult(
        "remainder derivative seminorm", "Bloch seminorm of G'",
        lhs, factor * seminorm, lhs <= factor * seminorm,
    )
