"""Asymptotic variance, tail variance and exponential type spectrum
estimators, evaluated on radii ladders r -> 1-.

Every quantity is a circle mean of a function of the dilate g(r zeta),
normalized by L(r) = log(1/(1 - r^2)). Limits superior are replaced by the
maximum over the last LIMSUP_TAIL ladder radii.
"""

import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DiskbenchError, DomainError
from .grids import CHUNK, angular_count, circle_mean, circle_values
from .models import (
    CheckResult,
    CircleSamples,
    ClosedFormFunction,
    HolomorphicFunction,
    PowerSeries,
    RadiiLadder,
    SpectrumEstimate,
    SweepTable,
    log_normalizer,
)

logger = logging.getLogger(__name__)

#: Exponents above this are clipped and the sample is flagged divergent.
OVERFLOW_EXPONENT = 700.0
#: Number of outermost ladder radii standing in for a limit superior.
LIMSUP_TAIL = 5
#: Growth exponent above which a tail-variance candidate is rejected.
ATVAR_SLOPE_LIMIT = 0.05


def main_bound(a: float) -> float:
    """The uniform tail-integral bound 10 (1 - a)^(-3/2)."""
    if not 0.0 <= a < 1.0:
        raise DomainError(f"the uniform bound needs 0 <= a < 1, got {a}")
    return 10.0 * (1.0 - a) ** -1.5


def log_pole_function() -> ClosedFormFunction:
    """log(1/(1 - z)), whose dilates have the exact exponential integral
    int |1 - r zeta|^-2 ds = 1/(1 - r^2)."""

    def series(degree: int) -> PowerSeries:
        j = np.arange(1, degree + 1)
        return PowerSeries(np.concatenate(([0.0], 1.0 / j)), name="log(1/(1-z))")

    return ClosedFormFunction(
        lambda z: -np.log1p(-z), lambda z: 1.0 / (1.0 - z),
        name="log(1/(1-z))", series=series,
    )


def _check_radius(r: float):
    if not 0.0 < r < 1.0:
        raise DomainError(f"radius must lie in (0, 1), got {r}")


def _degree(g) -> Optional[int]:
    return g.degree if isinstance(g, PowerSeries) else None


def _exp_means(
    g: HolomorphicFunction,
    r: float,
    exponent: Callable[[np.ndarray], np.ndarray],
    n: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Circle means of exp(exponent(g(r zeta))), clipping at OVERFLOW_EXPONENT.

    ``exponent`` maps the values of g to a 1-D array, or to a (k, len) array
    for k integrands sharing one evaluation of g. Returns the means and, per
    integrand, whether any sample was clipped.
    """
    n = angular_count(r, _degree(g)) if n is None else n
    flags = None

    def integrand(values):
        nonlocal flags
        e = np.real(np.asarray(exponent(values)))
        over = np.max(e, axis=-1) > OVERFLOW_EXPONENT
        flags = over if flags is None else (flags | over)
        return np.exp(np.minimum(e, OVERFLOW_EXPONENT))

    if isinstance(g, PowerSeries) and n <= CHUNK:
        means = np.mean(integrand(g.on_circle(r, n)), axis=-1)
    else:
        means = circle_mean(lambda points: integrand(np.asarray(g(points))), r, n)
    means = np.atleast_1d(np.real(means)).astype(float)
    flags = np.atleast_1d(flags)
    means[flags] = np.inf
    return means, flags


def normalized_dilate(g: HolomorphicFunction, r: float, n: Optional[int] = None) -> CircleSamples:
    """Samples of X_r(zeta) = g(r zeta)/sqrt(L(r)) on the unit circle.

    Raises:
        DomainError: If r is not in (0, 1)
    """
    _check_radius(r)
    n = angular_count(r, _degree(g)) if n is None else n
    values = circle_values(g, r, n) / math.sqrt(log_normalizer(r))
    return CircleSamples(1.0, values)


def circle_l2_squared(g: HolomorphicFunction, r: float) -> float:
    """int |g(r zeta)|^2 ds, by Parseval for polynomials."""
    if isinstance(g, PowerSeries):
        return g.l2_circle_norm_sq(r)
    n = angular_count(r)
    return float(np.real(circle_mean(lambda z: np.abs(g(z)) ** 2, r, n)))


def variance_ratios(g: HolomorphicFunction, ladder: RadiiLadder) -> np.ndarray:
    return np.array([circle_l2_squared(g, r) / log_normalizer(r) for r in ladder])


def avar_estimate(g: HolomorphicFunction, ladder: RadiiLadder, tail: int = LIMSUP_TAIL) -> float:
    """Largest variance ratio int |g_r|^2 ds / L(r) over the ladder tail."""
    return float(np.max(variance_ratios(g, ladder)[-tail:]))


def uniform_avar_estimate(corpus: Sequence[HolomorphicFunction], ladder: RadiiLadder,
                          tail: int = LIMSUP_TAIL) -> float:
    """Supremum over a family at each radius, then the ladder-tail maximum."""
    ratios = np.max([variance_ratios(g, ladder) for g in corpus], axis=0)
    return float(np.max(ratios[-tail:]))


def _quadratic_means(g: HolomorphicFunction, r: float, coeffs: Sequence[float],
                     n: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Means of exp(c |g(r zeta)|^2) for every c in ``coeffs``."""
    coeffs = np.asarray(coeffs, dtype=float)
    return _exp_means(g, r, lambda v: coeffs[:, None] * (np.abs(v) ** 2)[None, :], n)


def tail_integral(g: HolomorphicFunction, a: float, r: float, n: Optional[int] = None) -> float:
    """I_g(a, r) = int exp(a r^4 |g(r zeta)|^2 / L(r)) ds.

    Returns +inf, with a warning, when an exponent exceeds OVERFLOW_EXPONENT.

    Raises:
        DomainError: If a < 0 or r is not in (0, 1)
    """
    if a < 0:
        raise DomainError(f"tail integral needs a >= 0, got {a}")
    _check_radius(r)
    values, flags = _quadratic_means(g, r, [a * r ** 4 / log_normalizer(r)], n)
    if flags[0]:
        logger.warning("divergent sample in tail integral at a=%g r=%.12g", a, r)
    return float(values[0])


def tail_integral_sweep(g: HolomorphicFunction, a_grid: Sequence[float], ladder: RadiiLadder) -> SweepTable:
    """I_g(a, r) for every (a, r) cell; |g|^2 is computed once per radius.

    Rows are ordered by a, then by radius.
    """
    a_grid = np.asarray(a_grid, dtype=float)
    if np.any(a_grid < 0):
        raise DomainError("tail integral needs a >= 0")
    columns = []
    for r in ladder:
        values, flags = _quadratic_means(g, r, a_grid * r ** 4 / log_normalizer(r))
        if np.any(flags):
            logger.warning("divergent sample in sweep of %s at r=%.12g", g.name, r)
        columns.append((float(r), values, flags))
        logger.debug("sweep %s r=%.12g done", g.name, r)
    table = SweepTable(parameter_name="a")
    for i, a in enumerate(a_grid):
        for r, values, flags in columns:
            table.add(float(a), r, float(values[i]), bool(flags[i]))
    return table


def exponential_integral(g: HolomorphicFunction, t: complex, r: float, radial_power: int = 0,
                         n: Optional[int] = None) -> Tuple[float, bool]:
    """int |exp(t r^k g(r zeta))| ds with k = ``radial_power``; returns
    (value, overflowed)."""
    factor = complex(t) * r ** radial_power
    values, flags = _exp_means(g, r, lambda v: np.real(factor * v), n)
    return float(values[0]), bool(flags[0])


def tau_sweep(g: HolomorphicFunction, tau: float, radii: Sequence[float]) -> Tuple[np.ndarray, bool]:
    """int exp(|X_r|^2/tau) ds over ``radii``; returns values and an overflow flag."""
    values, overflow = [], False
    for r in radii:
        v, flags = _quadratic_means(g, r, [1.0 / (tau * log_normalizer(r))])
        values.append(v[0])
        overflow = overflow or bool(flags[0])
    return np.array(values), overflow


def tail_slope(L: np.ndarray, values: np.ndarray) -> Tuple[float, float]:
    """Least-squares slope of log(values) against L, with RMS residual."""
    A = np.vstack([L, np.ones_like(L)]).T
    y = np.log(values)
    solution, residuals, _, _ = np.linalg.lstsq(A, y, rcond=None)
    fit = A @ solution
    rms = float(np.sqrt(np.mean((y - fit) ** 2)))
    return float(solution[0]), rms


def atvar_estimate(
    g: HolomorphicFunction,
    ladder: RadiiLadder,
    tau_grid: Sequence[float],
    tail: int = LIMSUP_TAIL,
    slope_limit: float = ATVAR_SLOPE_LIMIT,
) -> float:
    """Smallest tau on the grid whose exponential sweep stays bounded.

    A candidate tau is rejected when the sweep of int exp(|X_r|^2/tau) ds over
    the ladder tail overflows, doubles between consecutive radii, or grows
    with a least-squares exponent in L(r) above ``slope_limit``. Returns
    +inf when every candidate is rejected.
    """
    tau_grid = np.sort(np.asarray(tau_grid, dtype=float))
    if tau_grid.size == 0 or tau_grid[0] <= 0:
        raise DomainError("tau grid must be non-empty and positive")
    radii = ladder.tail(tail)
    L = log_normalizer(radii)
    for tau in tau_grid:
        values, overflow = tau_sweep(g, tau, radii)
        if overflow or not np.all(np.isfinite(values)):
            logger.debug("tau=%g rejected: overflow", tau)
            continue
        if np.any(values[1:] >= 2.0 * values[:-1]):
            logger.debug("tau=%g rejected: sweep doubles", tau)
            continue
        if radii.size >= 2:
            slope, _ = tail_slope(L, values)
            if slope > slope_limit:
                logger.debug("tau=%g rejected: growth exponent %.4g", tau, slope)
                continue
        return float(tau)
    return float("inf")


def gaussian_tail_expectation(tau: float, variance: float = 1.0) -> float:
    """E exp(|X|^2/tau) = tau/(tau - variance) for a complex Gaussian X."""
    if tau <= variance:
        return float("inf")
    return tau / (tau - variance)


def makarov_check(
    g: HolomorphicFunction,
    r: float,
    taus: Sequence[float] = (1.5, 2.0, 4.0),
    seminorm: float = 1.0,
    tol: float = 1e-6,
) -> List[CheckResult]:
    """Finite-radius variance and exponential bounds for g(0) = 0.

    int |g_r|^2 ds / L(r) <= ||g||^2 and
    int exp(|X_r|^2/tau) ds <= tau/(tau - ||g||^2) for tau > ||g||^2.
    """
    _check_radius(r)
    s2 = seminorm ** 2
    ratio = circle_l2_squared(g, r) / log_normalizer(r)
    results = [CheckResult("variance ratio", "finite-radius Makarov variance bound",
                           ratio, s2, ratio <= s2 + tol, f"r={r}")]
    for tau in taus:
        value = tau_sweep(g, tau, [r])[0][0]
        bound = gaussian_tail_expectation(tau, s2)
        results.append(CheckResult(
            "exponential integral", "finite-radius Makarov exponential bound",
            value, bound, bool(value <= bound + tol), f"r={r} tau={tau}",
        ))
    return results


def marshall_bound_check(g: HolomorphicFunction, sigma: float, t: complex, r: float,
                         n: Optional[int] = None) -> CheckResult:
    """int |e^(t g_r)| ds <= (1-r^2)^(-sigma^2 |t|^2/4) int exp(|g_r|^2/(sigma^2 L)) ds.

    Both sides use the same nodes; the inequality holds sample by sample.
    """
    if sigma <= 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    _check_radius(r)
    L = log_normalizer(r)
    n = angular_count(r, _degree(g)) if n is None else n
    lhs, over_l = exponential_integral(g, t, r, n=n)
    rhs_mean, flags = _quadratic_means(g, r, [1.0 / (sigma ** 2 * L)], n)
    rhs = float(np.exp(sigma ** 2 * abs(t) ** 2 * L / 4.0) * rhs_mean[0])
    flagged = over_l or bool(flags[0])
    passed = lhs <= rhs * (1.0 + 1e-10)
    return CheckResult("Marshall modulus bound", "arithmetic-geometric mean splitting",
                       lhs, rhs, bool(passed), "overflow" if flagged else "")


def betterest_exponent(a: float, t: complex) -> float:
    """Exponent of (1 - r^2) in the bound of int |e^(t r^2 g_r)| by I_g(a, r).

    -|t|^2/(4a) for |t| <= 2a and a - |t| beyond.

    Raises:
        DomainError: If a <= 0
    """
    if a <= 0:
        raise DomainError(f"a must be positive, got {a}")
    s = abs(t)
    if s <= 2.0 * a:
        return -s * s / (4.0 * a)
    return a - s


def betterest_bound_check(g: HolomorphicFunction, a: float, t: complex, r: float,
                          rtol: float = 1e-9) -> CheckResult:
    """int |e^(t r^2 g_r)| ds <= I_g(a, r) (1 - r^2)^betterest_exponent(a, t).

    Valid for g = P mu with ||mu|| <= 1, where r^2 |g(r zeta)| <= L(r).
    """
    _check_radius(r)
    n = angular_count(r, _degree(g))
    lhs, _ = exponential_integral(g, t, r, radial_power=2, n=n)
    I = tail_integral(g, a, r, n=n)
    rhs = I * (1.0 - r * r) ** betterest_exponent(a, t)
    return CheckResult("exponential moment via tail integral", "splice of the quadratic and linear branches",
                       lhs, rhs, bool(lhs <= rhs * (1.0 + rtol)), f"a={a} t={t} r={r}")


def spectrum_envelope(t: complex) -> float:
    """|t|^2/4 for |t| <= 2 and |t| - 1 beyond."""
    s = abs(t)
    return s * s / 4.0 if s <= 2.0 else s - 1.0


def exp_type_spectrum(
    g: HolomorphicFunction,
    t: complex,
    ladder: RadiiLadder,
    tail: int = LIMSUP_TAIL,
    min_radius: float = 1.0 - 1e-5,
) -> SpectrumEstimate:
    """Growth exponent of int |e^(t g_r)| ds against L(r) over the ladder tail.

    Divergent samples are dropped with a warning.

    Raises:
        DomainError: If the ladder stops short of ``min_radius``
        DiskbenchError: If fewer than two samples remain
    """
    if ladder.radii[-1] < min_radius:
        raise DomainError(
            f"ladder must reach {min_radius}, stops at {ladder.radii[-1]}"
        )
    radii = ladder.tail(tail)
    kept_L, kept_v, dropped = [], [], 0
    for r in radii:
        value, overflow = exponential_integral(g, t, r)
        if overflow or not np.isfinite(value) or value <= 0:
            logger.warning("dropping divergent sample at r=%.12g for t=%s", r, t)
            dropped += 1
            continue
        kept_L.append(log_normalizer(r))
        kept_v.append(value)
    if len(kept_v) < 2:
        raise DiskbenchError("not enough finite samples for a spectrum fit")
    slope, rms = tail_slope(np.array(kept_L), np.array(kept_v))
    return SpectrumEstimate(complex(t), slope, rms, len(kept_v), dropped)


def moment_bound(q: float, r: float, mu_sup: float = 1.0) -> float:
    """10 (3+q)^(3/2) ||mu||^q (q/2e)^(q/2) (r^-4 L(r))^(q/2)."""
    if q <= 0:
        raise DomainError(f"moment order must be positive, got {q}")
    _check_radius(r)
    return (10.0 * (3.0 + q) ** 1.5 * mu_sup ** q * (q / (2.0 * math.e)) ** (q / 2.0)
            * (log_normalizer(r) / r ** 4) ** (q / 2.0))


def moment_bound_check(g: HolomorphicFunction, q: float, r: float, mu_sup: float = 1.0) -> CheckResult:
    """int |g_r|^q ds against the moment bound for g = P mu."""
    rhs = moment_bound(q, r, mu_sup)
    if q == 2:
        lhs = circle_l2_squared(g, r)
    else:
        n = angular_count(r, _degree(g))
        lhs = float(np.real(circle_mean(lambda z: np.abs(g(z)) ** q, r, n)))
    return CheckResult("integral means", "moments of projections", lhs, rhs,
                       bool(lhs <= rhs), f"q={q} r={r}")


def subadditivity_check(g_values: np.ndarray, h_values: np.ndarray, alpha: float,
                        rtol: float = 1e-12) -> CheckResult:
    """|g + h|^2 <= (1 + alpha)|g|^2 + (1 + 1/alpha)|h|^2 sample by sample."""
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    g_values = np.asarray(g_values, dtype=complex)
    h_values = np.asarray(h_values, dtype=complex)
    lhs = np.abs(g_values + h_values) ** 2
    rhs = (1.0 + alpha) * np.abs(g_values) ** 2 + (1.0 + 1.0 / alpha) * np.abs(h_values) ** 2
    excess = lhs - rhs * (1.0 + rtol)
    worst = int(np.argmax(excess))
    return CheckResult("pointwise subadditivity", "weighted triangle inequality",
                       float(lhs[worst]), float(rhs[worst]), bool(np.all(excess <= 1e-300)))


def main_theorem_check(g: HolomorphicFunction, a_grid: Sequence[float], ladder: RadiiLadder,
                       name: Optional[str] = None) -> CheckResult:
    """Largest I_g(a, r) / 10(1-a)^(-3/2) over a sweep; passes when <= 1."""
    table = tail_integral_sweep(g, a_grid, ladder)
    worst, worst_row = -np.inf, None
    for row in table.rows:
        ratio = row.value / main_bound(row.parameter)
        if ratio > worst:
            worst, worst_row = ratio, row
    return CheckResult(
        "uniform tail integral", "tail integral bounded by 10(1-a)^(-3/2)",
        worst_row.value, main_bound(worst_row.parameter), bool(worst <= 1.0),
        f"{name or g.name}: a={worst_row.parameter} r={worst_row.radius:.8f}",
    )
