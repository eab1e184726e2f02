"""Univalent maps of the disk and of its exterior.

A map phi in S (phi(0) = 0, phi'(0) = 1) is studied through
g_phi(z) = log(z^2 phi'(z)/phi(z)^2), which equals h_psi(1/z) for the
exterior map psi(zeta) = 1/phi(1/zeta) with h_psi = log psi'.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from .bloch import random_bloch_polynomial, seminorm_radii
from .errors import DomainError
from .grids import composite_gauss_grid, field_moments
from .models import CheckResult, DiskField, PolarGrid, PowerSeries

logger = logging.getLogger(__name__)

#: Taylor degree used to evaluate maps known only through their series.
SERIES_DEGREE = 256
#: Angles per ring when scanning the disk for distortion bounds.
SCAN_ANGLES = 512
AGM_TOL = 1e-16


@dataclass
class SchlichtMap:
    """phi in S with optional closed forms for phi, phi', phi'' and g_phi, g_phi'.

    ``series(n)`` returns the Taylor polynomial of phi of degree n; whatever
    has no closed form is evaluated from it.
    """

    name: str
    series: Callable[[int], PowerSeries]
    closed: Optional[Tuple[Callable, Callable, Callable]] = None
    g_closed: Optional[Tuple[Callable, Callable]] = None

    def __post_init__(self):
        head = self.series(2).coeffs
        if abs(head[0]) > 1e-14 or abs(head[1] - 1.0) > 1e-14:
            raise DomainError(f"{self.name} is not normalized by phi(0) = 0, phi'(0) = 1")
        self._cache = None

    def _taylor(self) -> PowerSeries:
        if self._cache is None:
            self._cache = self.series(SERIES_DEGREE)
        return self._cache

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.closed[0](z) if self.closed else self._taylor()(z)

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        return self.closed[1](z) if self.closed else self._taylor().derivative()(z)

    def second_derivative(self, z):
        z = np.asarray(z, dtype=complex)
        return self.closed[2](z) if self.closed else self._taylor().derivative().derivative()(z)

    def g_series(self, degree: int) -> PowerSeries:
        """Taylor polynomial of g_phi = log phi' - 2 log(phi/z)."""
        phi = self.series(degree + 1)
        quotient = PowerSeries(phi.coeffs[1:])
        g = phi.derivative().log(degree) - quotient.log(degree) * 2.0
        g.name = f"g[{self.name}]"
        return g

    def h_series(self, degree: int) -> PowerSeries:
        """Taylor polynomial of h_phi = log phi'."""
        return self.series(degree + 1).derivative().log(degree)

    def __repr__(self) -> str:
        return f"SchlichtMap(name={self.name!r})"


def _koebe_series(rotation: complex = 1.0) -> Callable[[int], PowerSeries]:
    def series(degree: int) -> PowerSeries:
        n = np.arange(degree + 1)
        return PowerSeries(n * rotation ** np.maximum(n - 1, 0))
    return series


def koebe() -> SchlichtMap:
    """k(z) = z/(1-z)^2, for which g_phi(z) = log(1 - z^2)."""
    return rotated_koebe(0.0)


def rotated_koebe(alpha: float) -> SchlichtMap:
    """e^(-i alpha) k(e^(i alpha) z)."""
    u = complex(np.exp(1j * alpha))
    u2 = u * u
    closed = (
        lambda z: z / (1.0 - u * z) ** 2,
        lambda z: (1.0 + u * z) / (1.0 - u * z) ** 3,
        lambda z: u * (2.0 * u * z + 4.0) / (1.0 - u * z) ** 4,
    )
    g_closed = (
        lambda z: np.log(1.0 - u2 * z * z),
        lambda z: -2.0 * u2 * z / (1.0 - u2 * z * z),
    )
    name = "koebe" if alpha == 0 else f"koebe[{alpha:g}]"
    return SchlichtMap(name, _koebe_series(u), closed, g_closed)


def identity_map() -> SchlichtMap:
    closed = (lambda z: z, lambda z: np.ones_like(z), lambda z: np.zeros_like(z))
    g_closed = (lambda z: np.zeros_like(z), lambda z: np.zeros_like(z))
    return SchlichtMap("identity", lambda degree: PowerSeries.monomial(1).truncate(max(degree, 1)),
                       closed, g_closed)


def becker_map(rng: np.random.Generator, degree: int = 12, scale: float = 1.0) -> SchlichtMap:
    """phi with phi' = exp(g) for a random polynomial g, g(0) = 0, ||g||_B = scale <= 1.

    Such maps are univalent by Becker's criterion.
    """
    if not 0 < scale <= 1:
        raise DomainError(f"Becker maps need 0 < scale <= 1, got {scale}")
    g = random_bloch_polynomial(rng, degree) * scale
    dg = g.derivative()

    def series(n: int) -> PowerSeries:
        return g.exp(max(n - 1, 0)).antiderivative()

    closed = (
        lambda z: series(SERIES_DEGREE)(z),
        lambda z: np.exp(g(z)),
        lambda z: dg(z) * np.exp(g(z)),
    )
    return SchlichtMap(f"becker[{degree}]", series, closed)


def schlicht_corpus(seed: int = 0, n_becker: int = 3) -> list:
    rng = np.random.default_rng(seed)
    maps = [identity_map(), koebe(), rotated_koebe(math.pi / 3), rotated_koebe(1.0)]
    maps.extend(becker_map(rng) for _ in range(n_becker))
    return maps


def g_phi(phi: SchlichtMap, z):
    """log(z^2 phi'(z)/phi(z)^2) on the principal branch, 0 at the origin.

    Raises:
        DomainError: If phi vanishes at a point other than the origin
    """
    z = np.asarray(z, dtype=complex)
    if phi.g_closed:
        return phi.g_closed[0](z)
    at_origin = z == 0
    safe = np.where(at_origin, 0.5, z)
    values = phi(safe)
    if np.any(np.abs(values) == 0):
        raise DomainError(f"{phi.name} vanishes away from the origin")
    out = np.where(at_origin, 0.0, np.log(safe ** 2 * phi.derivative(safe) / values ** 2))
    return complex(out) if out.ndim == 0 else out


def g_phi_derivative(phi: SchlichtMap, z):
    """phi''/phi' - 2 phi'/phi + 2/z, with the series value at 0."""
    z = np.asarray(z, dtype=complex)
    if phi.g_closed:
        return phi.g_closed[1](z)
    at_origin = z == 0
    safe = np.where(at_origin, 0.5, z)
    d1 = phi.derivative(safe)
    value = phi.second_derivative(safe) / d1 - 2.0 * d1 / phi(safe) + 2.0 / safe
    out = np.where(at_origin, phi.g_series(1).coeffs[1], value)
    return complex(out) if out.ndim == 0 else out


def _scan_points(octaves: int = 10) -> np.ndarray:
    radii = seminorm_radii(octaves)[1:]
    theta = 2.0 * np.pi * np.arange(SCAN_ANGLES) / SCAN_ANGLES
    return (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()


def koebe_bieberbach_check(phi: SchlichtMap, points: Optional[np.ndarray] = None) -> CheckResult:
    """|(1-|z|^2) phi''/phi' - 2 conj(z)| <= 4."""
    z = _scan_points() if points is None else np.asarray(points, dtype=complex)
    w = 1.0 - np.abs(z) ** 2
    lhs = float(np.max(np.abs(w * phi.second_derivative(z) / phi.derivative(z) - 2.0 * np.conj(z))))
    return CheckResult("Koebe-Bieberbach", "pre-Schwarzian distortion",
                       lhs, 4.0, lhs <= 4.0 + 1e-9, phi.name)


def h_phi_seminorm(phi: SchlichtMap, points: Optional[np.ndarray] = None) -> float:
    """Grid estimate of sup (1-|z|^2) |phi''/phi'|, the Bloch seminorm of log phi'."""
    z = _scan_points() if points is None else np.asarray(points, dtype=complex)
    return float(np.max((1.0 - np.abs(z) ** 2) * np.abs(phi.second_derivative(z) / phi.derivative(z))))


def pointwise_distortion_check(phi: SchlichtMap, points: Optional[np.ndarray] = None) -> CheckResult:
    """|g_phi(z)| <= log(1/(1-|z|^2)), with equality for Koebe on the real axis."""
    z = _scan_points(6) if points is None else np.asarray(points, dtype=complex)
    gap = np.abs(g_phi(phi, z)) + np.log1p(-np.abs(z) ** 2)
    worst = int(np.argmax(gap))
    lhs = float(np.abs(g_phi(phi, z[worst])))
    rhs = float(-np.log1p(-abs(z[worst]) ** 2))
    return CheckResult("pointwise distortion", "optimal pointwise bound for g_phi",
                       lhs, rhs, bool(np.all(gap <= 1e-12)), phi.name)


def elliptic_EK(s: float, method: str = "agm") -> Tuple[float, float]:
    """Complete elliptic integrals E(s) and K(s) of modulus s.

    K(1) is returned as +inf. ``method`` is "agm" (arithmetic-geometric
    mean) or "quadrature" (scipy quad after t = sin(theta)).

    Raises:
        DomainError: If s is outside [0, 1] or the method is unknown
    """
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"elliptic modulus must lie in [0, 1], got {s}")
    if s == 1.0:
        return 1.0, math.inf
    if method == "agm":
        a, b, c = 1.0, math.sqrt(1.0 - s * s), s
        total, power = 0.5 * c * c, 0.5
        while abs(c) > AGM_TOL:
            a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
            power *= 2.0
            total += power * c * c
        K = math.pi / (2.0 * a)
        return K * (1.0 - total), K
    if method == "quadrature":
        m = s * s
        K, _ = integrate.quad(lambda t: 1.0 / math.sqrt(1.0 - m * math.sin(t) ** 2), 0.0, math.pi / 2,
                              epsabs=1e-13, epsrel=1e-12, limit=200)
        E, _ = integrate.quad(lambda t: math.sqrt(1.0 - m * math.sin(t) ** 2), 0.0, math.pi / 2,
                              epsabs=1e-13, epsrel=1e-12, limit=200)
        return E, K
    raise DomainError(f"Unsupported elliptic method: {method}")


def elliptic_ratio_check(grid: Sequence[float]) -> CheckResult:
    """1 - s^2 <= E(s)/K(s) <= 1 on a grid of moduli in [0, 1)."""
    worst, ok = 0.0, True
    for s in grid:
        E, K = elliptic_EK(float(s))
        ratio = E / K
        ok = ok and (1.0 - s * s - 1e-14 <= ratio <= 1.0 + 1e-14)
        worst = max(worst, ratio - 1.0, 1.0 - s * s - ratio)
    return CheckResult("elliptic ratio", "E/K between 1 - s^2 and 1", worst, 0.0, ok)


class ExteriorMap(ABC):
    """psi in Sigma, psi(zeta) = zeta + O(1) at infinity."""

    name = "psi"

    @abstractmethod
    def __call__(self, zeta):
        pass

    @abstractmethod
    def h(self, zeta):
        """h_psi = log psi'."""

    @abstractmethod
    def dh(self, zeta):
        """h_psi' = psi''/psi'."""

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r})"


class IdentityExteriorMap(ExteriorMap):
    name = "identity"

    def __call__(self, zeta):
        return np.asarray(zeta, dtype=complex)

    def h(self, zeta):
        return np.zeros_like(np.asarray(zeta, dtype=complex))

    def dh(self, zeta):
        return np.zeros_like(np.asarray(zeta, dtype=complex))


class JoukowskiMap(ExteriorMap):
    """zeta + 1/zeta, onto the complement of [-2, 2]."""

    name = "joukowski"

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        return zeta + 1.0 / zeta

    def h(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        return np.log(1.0 - zeta ** -2)

    def dh(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        return 2.0 / (zeta * (zeta * zeta - 1.0))


class LaurentExteriorMap(ExteriorMap):
    """zeta + b_0 + b_1/zeta + b_2/zeta^2 + ... for finitely many b_k."""

    def __init__(self, coeffs: Sequence[complex], name: str = "laurent"):
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.name = name
        # psi'(zeta) = 1 - sum_k k b_k zeta^(-k-1), a polynomial in w = 1/zeta
        k = np.arange(len(self.coeffs))
        tail = np.zeros(len(self.coeffs) + 1, dtype=complex)
        tail[0] = 1.0
        tail[2:] = -(k[1:] * self.coeffs[1:])
        self._dpsi = PowerSeries(tail)

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        return zeta + PowerSeries(self.coeffs)(1.0 / zeta)

    def h(self, zeta):
        return np.log(self._dpsi(1.0 / np.asarray(zeta, dtype=complex)))

    def dh(self, zeta):
        w = 1.0 / np.asarray(zeta, dtype=complex)
        # d/dzeta = -w^2 d/dw
        return -w * w * self._dpsi.derivative()(w) / self._dpsi(w)


class ExteriorFromSchlicht(ExteriorMap):
    """psi(zeta) = 1/phi(1/zeta), handled through h_psi(zeta) = g_phi(1/zeta)."""

    def __init__(self, phi: SchlichtMap):
        self.phi = phi
        self.name = f"psi[{phi.name}]"

    def __call__(self, zeta):
        return 1.0 / self.phi(1.0 / np.asarray(zeta, dtype=complex))

    def h(self, zeta):
        return g_phi(self.phi, 1.0 / np.asarray(zeta, dtype=complex))

    def dh(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        return -g_phi_derivative(self.phi, 1.0 / zeta) / zeta ** 2


def psi_from_phi(phi: SchlichtMap) -> ExteriorFromSchlicht:
    return ExteriorFromSchlicht(phi)


def goluzin_check(psi: ExteriorMap, zeta: complex, rtol: float = 1e-9) -> CheckResult:
    """Goluzin's sharp inequality for psi in Sigma and its simplified form.

    |zeta h' + (4x-2)/(x-1) - 4x/(x-1) E/K| <= 4x/(x-1) (1 - E/K), with
    x = |zeta|^2 and E/K taken at 1/|zeta|; simplified, |zeta h'| <= 6/(x-1).

    Raises:
        DomainError: If |zeta| <= 1
    """
    zeta = complex(zeta)
    if abs(zeta) <= 1.0:
        raise DomainError(f"Goluzin's inequality needs |zeta| > 1, got {abs(zeta):.6g}")
    x = abs(zeta) ** 2
    E, K = elliptic_EK(1.0 / abs(zeta))
    ratio = E / K
    term = zeta * complex(psi.dh(zeta))
    center = (4.0 * x - 2.0) / (x - 1.0) - 4.0 * x / (x - 1.0) * ratio
    lhs = abs(term + center)
    rhs = 4.0 * x / (x - 1.0) * (1.0 - ratio)
    simple_lhs, simple_rhs = abs(term), 6.0 / (x - 1.0)
    passed = lhs <= rhs * (1.0 + rtol) + 1e-15 and simple_lhs <= simple_rhs
    return CheckResult("Goluzin inequality", "sharp distortion bound in Sigma",
                       lhs, rhs, passed, f"{psi.name} at {zeta:.6g}",
                       extra={"simple_lhs": simple_lhs, "simple_rhs": simple_rhs})


def nu_phi(phi: SchlichtMap, grid: Optional[PolarGrid] = None, J: int = 256) -> DiskField:
    """nu_phi(z) = (1-|z|^2) g_phi'(z)/z sampled from the degree-J Taylor
    polynomial of g_phi; the quotient is a series, so 0 needs no care."""
    g = phi.g_series(J + 2)
    quotient = PowerSeries(g.coeffs[2:] * np.arange(2, J + 3)) if J >= 0 else PowerSeries([0.0])
    if grid is None:
        grid = composite_gauss_grid(J + 4, 1 << (2 * J + 4).bit_length(), breaks=(0.0, 1.0))
    values = (1.0 - np.abs(grid.points) ** 2) * quotient(grid.points)
    return DiskField(grid, values)


def reconstruction_check(phi: SchlichtMap, J: int = 256, tol: float = 1e-8) -> CheckResult:
    """z^2 P nu_phi = g_phi coefficient by coefficient up to degree J + 2."""
    field = nu_phi(phi, J=J)
    coeffs = (np.arange(J + 1) + 1.0) * field_moments(field, J)
    target = phi.g_series(J + 2).coeffs[2:]
    residual = float(np.max(np.abs(coeffs - target)))
    return CheckResult("nu_phi reconstruction", "z^2 P nu_phi reproduces g_phi",
                       residual, tol, residual <= tol, f"{phi.name} J={J}",
                       extra={"nu_sup": field.sup_norm})


def nu_phi_bound_check(phi: SchlichtMap, J: int = 128) -> CheckResult:
    """||nu_phi||_inf <= 6."""
    sup = nu_phi(phi, J=J).sup_norm
    return CheckResult("nu_phi norm", "sup norm of nu_phi", sup, 6.0, sup <= 6.0, phi.name)
