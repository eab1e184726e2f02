"""Integral operators on the unit disk.

The Bergman projection P, the Cauchy transform C and the Beurling transform
S are all evaluated through area moments of the symbol:

    P mu(z)      = sum_j (j+1) z^j  int mu(w) conj(w)^j dA(w)
    C mu(zeta)   = sum_n zeta^(-n-1) int mu(w) w^n dA(w),        |zeta| > 1
    S mu(1/z)    = -z^2 P mu*(z),                                |z| < 1

with mu*(w) = mu(conj w). Closed-form symbols supply exact moments; other
symbols use polar quadrature.
"""

import logging
import math
from typing import Callable, Optional, Sequence

import numpy as np

from .bloch import bloch_seminorm
from .errors import DomainError, SupportBoundaryError, SymbolError
from .grids import (
    angular_modes,
    field_moments,
    gauss_legendre_grid,
    integrate_on_grid,
    circle_mean,
)
from .models import (
    CheckResult,
    ClosedFormFunction,
    DiskField,
    HolomorphicFunction,
    PolarGrid,
    PowerSeries,
    ProjectionResult,
    log_normalizer,
)
from .symbols import Symbol

logger = logging.getLogger(__name__)

#: Distance from the unit circle below which the Cauchy expansions are refused.
SUPPORT_GAP = 1e-2
#: Laurent truncation cap for exterior Cauchy evaluations.
MAX_LAURENT_TERMS = 4096
PERALA_CONSTANT = 8.0 / math.pi


def _check_bounded(mu: Symbol) -> float:
    sup = mu.sup_norm()
    if not np.isfinite(sup):
        raise SymbolError(f"symbol not in L∞: {mu.name}")
    return sup


def antiholomorphic_moments(mu: Symbol, J: int, grid: Optional[PolarGrid] = None) -> np.ndarray:
    """int mu(w) conj(w)^j dA(w) for j = 0..J.

    Exact moments are used when the symbol has them and no grid is forced.
    """
    if grid is None:
        exact = mu.exact_antiholomorphic_moments(J)
        if exact is not None:
            return exact
        grid = mu.default_grid()
    return field_moments(mu.sample(grid), J)


def holomorphic_moments(mu: Symbol, J: int, grid: Optional[PolarGrid] = None) -> np.ndarray:
    """int mu(w) w^n dA(w) for n = 0..J."""
    if grid is None:
        exact = mu.exact_holomorphic_moments(J)
        if exact is not None:
            return exact
        grid = mu.default_grid()
    return field_moments(mu.sample(grid), J, holomorphic=True)


def _default_degree(mu: Symbol, grid: Optional[PolarGrid]) -> int:
    grid = grid if grid is not None else mu.default_grid()
    return grid.n_angles // 2 - 1


def bergman_project(mu: Symbol, J: Optional[int] = None, grid: Optional[PolarGrid] = None) -> ProjectionResult:
    """Bergman projection of a bounded symbol as a Taylor polynomial.

    Args:
        mu: Symbol in L-infinity of the disk
        J: Truncation degree; defaults to half the angular count minus one
        grid: Quadrature grid forcing numerical moments

    Returns:
        ProjectionResult whose residual is the magnitude of the last
        coefficient

    Raises:
        SymbolError: If the symbol is not bounded
    """
    _check_bounded(mu)
    if J is None:
        J = _default_degree(mu, grid)
    if J < 0:
        raise DomainError(f"truncation degree must be non-negative, got {J}")
    moments = antiholomorphic_moments(mu, J, grid)
    coeffs = (np.arange(J + 1) + 1.0) * moments
    series = PowerSeries(coeffs, name=f"P[{mu.name}]")
    return ProjectionResult(series, float(abs(coeffs[-1])))


def projection_function(mu: Symbol, J: Optional[int] = None) -> HolomorphicFunction:
    """P mu in closed form when the symbol has one, otherwise as a series."""
    closed = mu.projection()
    if closed is not None:
        return closed
    return bergman_project(mu, J).series


def cauchy_transform(
    mu: Symbol,
    zeta: complex,
    gap: float = SUPPORT_GAP,
    n_r: int = 64,
    n_a: int = 256,
) -> complex:
    """Cauchy transform int mu(w)/(zeta - w) dA(w) of a symbol on the disk.

    Outside the disk the Laurent series in zeta^-1 is summed from the
    holomorphic moments. Inside, the disk is split at |w| = |zeta| and each
    part is expanded in its own geometric series, one angular mode at a time.

    Raises:
        SupportBoundaryError: If ||zeta| - 1| < gap
    """
    _check_bounded(mu)
    s = abs(zeta)
    if abs(s - 1.0) < gap:
        raise SupportBoundaryError(zeta)
    if s > 1.0:
        needed = min(MAX_LAURENT_TERMS, int(math.ceil(37.0 / math.log(s))))
        moments = mu.exact_holomorphic_moments(needed)
        if moments is None:
            grid = mu.default_grid()
            J = min(needed, grid.n_angles // 2 - 1)
            if J < needed:
                logger.warning(
                    "Laurent series of %s truncated at %d terms (wanted %d)",
                    mu.name, J, needed,
                )
            moments = field_moments(mu.sample(grid), J, holomorphic=True)
        n = np.arange(moments.size)
        return complex(np.sum(moments * np.power(complex(zeta), -(n + 1.0))))
    return _cauchy_interior(mu, complex(zeta), n_r, n_a)


def _cauchy_interior(mu: Symbol, zeta: complex, n_r: int, n_a: int) -> complex:
    s = abs(zeta)
    top = n_a // 2 - 1
    total = 0j
    if s > 0:
        inner = gauss_legendre_grid(n_r, n_a, (0.0, s))
        modes = angular_modes(mu.sample(inner))
        rho, wts = inner.radii, inner.weights
        for n in range(top):
            a_n = np.sum(wts * rho ** n * modes[:, (-n) % n_a])
            total += a_n * zeta ** (-n - 1)
    outer = gauss_legendre_grid(n_r, n_a, (s, 1.0))
    modes = angular_modes(mu.sample(outer))
    rho, wts = outer.radii, outer.weights
    for m in range(top):
        b_m = np.sum(wts * rho ** (-m - 1.0) * modes[:, m + 1])
        total -= b_m * zeta ** m
    return complex(total)


def beurling_transform_exterior(mu: Symbol, zeta, J: Optional[int] = None):
    """Beurling transform outside the disk through S mu(1/z) = -z^2 P mu*(z).

    Raises:
        DomainError: If |zeta| <= 1
    """
    zeta = np.asarray(zeta, dtype=complex)
    if np.any(np.abs(zeta) <= 1.0):
        raise DomainError("interior evaluation not supported by this identity")
    z = 1.0 / zeta
    g = projection_function(mu.reflect(), J)
    value = -z ** 2 * g(z)
    return complex(value) if value.ndim == 0 else value


def beurling_exterior_series(mu: Symbol, J: Optional[int] = None, grid: Optional[PolarGrid] = None) -> PowerSeries:
    """Series F with S mu(zeta) = F(1/zeta) for |zeta| > 1.

    F(z) = -sum_n (n+1) m_n z^(n+2), m_n the holomorphic moments of mu.
    """
    _check_bounded(mu)
    if J is None:
        J = _default_degree(mu, grid)
    moments = holomorphic_moments(mu, J, grid)
    coeffs = np.zeros(J + 3, dtype=complex)
    coeffs[2:] = -(np.arange(J + 1) + 1.0) * moments
    return PowerSeries(coeffs, name=f"S[{mu.name}]")


def beurling_transform_interior(field: DiskField) -> DiskField:
    """Beurling transform of a field at the nodes of a midpoint grid.

    Each node radius s splits the disk into |w| < s and |w| > s, where the
    kernel (zeta - w)^-2 has convergent expansions. The radial integrals are
    midpoint sums over the other cells plus a half cell around s, and the
    value f(zeta) conj(zeta)/zeta accounts for the principal value of the
    non-symmetric split. The map is exact for constants.

    Raises:
        DomainError: If the field does not live on a midpoint grid
    """
    grid = field.grid
    rho = grid.radii
    n_r, n_a = rho.size, grid.n_angles
    h = 1.0 / n_r
    if not np.allclose(rho, (np.arange(n_r) + 0.5) * h):
        raise DomainError("interior Beurling transform needs a midpoint grid")
    modes = angular_modes(field)
    out = np.zeros((n_r, n_a), dtype=complex)

    lower = np.tril(np.ones((n_r, n_r), dtype=bool), -1)
    Q = np.where(lower, rho[None, :] / rho[:, None], 0.0)
    half_in = (rho - h / 4.0) / rho
    Qp, hp = Q.copy(), half_in.copy()
    for n in range(n_a // 2 - 2):
        f = modes[:, (-n) % n_a]
        a = (2.0 * h / rho) * (Qp @ f) + (h / rho) * hp * f
        out[:, (-(n + 2)) % n_a] -= (n + 1) * a
        Qp *= Q
        hp *= half_in

    upper = np.triu(np.ones((n_r, n_r), dtype=bool), 1)
    U = np.where(upper, rho[:, None] / rho[None, :], 0.0)
    cell_out = 2.0 * h / rho
    half_r = rho + h / 4.0
    half_out = rho / half_r
    Up, op = upper.astype(float), np.ones(n_r)
    for m in range(2, n_a // 2):
        f = modes[:, m]
        b = (Up * cell_out[None, :]) @ f + (h / half_r) * op * f
        out[:, m - 2] -= (m - 1) * b
        Up *= U
        op *= half_out

    values = np.fft.ifft(out, axis=1) * n_a
    values += np.exp(-2j * grid.angles)[None, :] * field.values
    return DiskField(grid, values)


def mobius(zeta: complex, z):
    """The involutive automorphism (zeta - z)/(1 - conj(zeta) z).

    Raises:
        DomainError: If |zeta| >= 1 or z sits on the pole
    """
    if abs(zeta) >= 1:
        raise DomainError(f"Mobius parameter must lie in the disk, got {zeta}")
    z = np.asarray(z, dtype=complex)
    den = 1.0 - np.conj(zeta) * z
    if np.any(np.abs(den) < 1e-300):
        raise DomainError("Mobius map evaluated at its pole")
    value = (zeta - z) / den
    return complex(value) if value.ndim == 0 else value


def compose_mobius(g: HolomorphicFunction, zeta: complex) -> ClosedFormFunction:
    """g composed with the automorphism exchanging 0 and zeta."""
    dg = g.derivative()
    c = complex(zeta)

    def deriv(z):
        return dg(mobius(c, z)) * (abs(c) ** 2 - 1.0) / (1.0 - np.conj(c) * z) ** 2

    return ClosedFormFunction(lambda z: g(mobius(c, z)), deriv, name=f"{g.name}o phi")


def pointwise_projection_bound(z):
    """(1/|z|^2) log(1/(1-|z|^2)), continued by 1 at the origin."""
    x2 = np.square(np.abs(np.asarray(z, dtype=complex)))
    small = x2 < 1e-8
    safe = np.where(small, 0.5, x2)
    value = np.where(small, 1.0 + x2 / 2.0, log_normalizer(np.sqrt(safe)) / safe)
    return float(value) if value.ndim == 0 else value


def dilate_symmetry_check(f: PowerSeries, g: PowerSeries, r: float, tol: float = 1e-10) -> CheckResult:
    """Check int f(rz) conj(g(z)) dA = int f(z) conj(g(rz)) dA by quadrature."""
    deg = max(f.degree, g.degree)
    grid = gauss_legendre_grid(deg + 2, max(16, 1 << (2 * deg + 2).bit_length()))
    lhs = integrate_on_grid(lambda w: f(r * w) * np.conj(g(w)), grid)
    rhs = integrate_on_grid(lambda w: f(w) * np.conj(g(r * w)), grid)
    return CheckResult(
        "dilate symmetry", "dilations move across the area pairing",
        lhs, rhs, bool(abs(lhs - rhs) <= tol), f"r={r}",
    )


def circle_disk_identity_check(
    g: PowerSeries,
    h: Callable[[np.ndarray], np.ndarray],
    dh: Callable[[np.ndarray], np.ndarray],
    r: float,
    degree: int,
    tol: float = 1e-10,
) -> CheckResult:
    """Check <g_r, conj(z) h>_T = <g, (dh)_r>_D for a harmonic polynomial h.

    Args:
        g: Polynomial
        h: Harmonic polynomial evaluated at points
        dh: Its complex derivative d h / dz
        r: Dilation radius
        degree: Largest degree present in g and h
    """
    n = max(16, 1 << (2 * degree + 4).bit_length())
    lhs = complex(circle_mean(lambda z: g(r * z) * np.conj(np.conj(z) * h(z)), 1.0, n))
    grid = gauss_legendre_grid(degree + 2, n)
    rhs = integrate_on_grid(lambda w: g(w) * np.conj(dh(r * w)), grid)
    return CheckResult(
        "circle-disk identity", "boundary pairing equals area pairing with the derivative",
        lhs, rhs, bool(abs(lhs - rhs) <= tol), f"r={r}",
    )


def bloch_image_check(mu: Symbol, J: Optional[int] = None, tol: float = 1e-6) -> CheckResult:
    """Bloch seminorm of P mu against (8/pi) ||mu||."""
    sup = _check_bounded(mu)
    seminorm = bloch_seminorm(projection_function(mu, J))
    bound = PERALA_CONSTANT * sup
    return CheckResult(
        "Bloch image bound", "projection norm from L-infinity to Bloch is 8/pi",
        seminorm, bound, bool(seminorm <= bound + tol), mu.name,
    )


def pointwise_bound_check(mu: Symbol, points: Sequence[complex], J: Optional[int] = None,
                          tol: float = 1e-9) -> CheckResult:
    """|P mu(z)| <= ||mu|| (1/|z|^2) log(1/(1-|z|^2)) at the given points."""
    sup = _check_bounded(mu)
    points = np.asarray(points, dtype=complex)
    g = projection_function(mu, J)
    lhs = np.abs(g(points))
    rhs = sup * pointwise_projection_bound(points)
    worst = int(np.argmax(lhs - rhs))
    return CheckResult(
        "pointwise projection bound", "growth of P mu at a point",
        float(lhs[worst]), float(rhs[worst]),
        bool(np.all(lhs <= rhs + tol)), mu.name,
    )


def mobius_invariance_check(g: HolomorphicFunction, zeta: complex, rtol: float = 1e-4) -> CheckResult:
    """Bloch seminorm of g o phi_zeta against that of g."""
    before = bloch_seminorm(g)
    after = bloch_seminorm(compose_mobius(g, zeta))
    return CheckResult(
        "Mobius invariance", "Bloch seminorm is invariant under disk automorphisms",
        after, before, bool(abs(after - before) <= rtol * max(1.0, before)),
        f"zeta={zeta}",
    )
