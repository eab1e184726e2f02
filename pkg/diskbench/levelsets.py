"""Green identities, entropy bounds and level sets of boundary dilates.

Harmonic functions enter through their boundary data: a Poisson extension
is held by its Fourier coefficients or in closed form, and disk integrals
are radial quadratures of circle means.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate, special

from .errors import DomainError
from .grids import (
    angular_count,
    circle_mean,
    circle_values,
    gauss_legendre_grid,
    integrate_on_grid,
    next_power_of_two,
)
from .models import (
    CheckResult,
    CircleSamples,
    HolomorphicFunction,
    LevelSetReport,
    PowerSeries,
    log_normalizer,
)
from .variance import tail_integral

logger = logging.getLogger(__name__)

#: Cap on samples per ring inside radial quadratures.
RING_ANGLES = 1 << 14
#: Polygon orders 3..MAX_SIDES are always scanned; larger minimizers are
#: located around pi sqrt(2E) (see :func:`level_set_bound`).
MAX_SIDES = 1000
#: Sample count used for boundary means of Fourier-defined extensions.
BOUNDARY_SAMPLES = 1 << 12


def entropy_density(t):
    """t log t, extended by 0 at t = 0."""
    return special.xlogy(t, t)


class HarmonicExtension(ABC):
    """A real harmonic function h on the disk together with d h/dz."""

    name = "h"

    @abstractmethod
    def __call__(self, z):
        pass

    @abstractmethod
    def dz(self, z):
        """Wirtinger derivative of h, a holomorphic function."""

    @abstractmethod
    def boundary_mean(self, func: Callable) -> float:
        """int func(h) ds over the unit circle."""

    def entropy(self) -> float:
        return float(self.boundary_mean(entropy_density))

    def lq_boundary(self, q: float) -> float:
        return float(self.boundary_mean(lambda t: np.abs(t) ** q))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r})"


class PoissonExtension(HarmonicExtension):
    """Poisson extension of a trigonometric polynomial.

    ``positive`` holds the coefficients h^(0), h^(1), ... of exp(i k theta);
    ``negative`` holds h^(-1), h^(-2), ... and defaults to the conjugates of
    the positive ones, which makes h real.
    """

    def __init__(self, positive: Sequence[complex], negative: Optional[Sequence[complex]] = None,
                 name: str = "h", samples: Optional[CircleSamples] = None):
        positive = np.asarray(positive, dtype=complex)
        negative = np.conj(positive[1:]) if negative is None else np.asarray(negative, dtype=complex)
        self._holomorphic = PowerSeries(positive, name=name)
        self._anti = PowerSeries(np.concatenate(([0.0], negative)), name=name)
        self._samples = samples
        self.name = name

    @classmethod
    def from_samples(cls, samples: CircleSamples, name: str = "h") -> "PoissonExtension":
        """Extension of boundary samples through their discrete Fourier coefficients."""
        if samples.radius != 1.0:
            raise DomainError("boundary data must be sampled on the unit circle")
        n = samples.n
        bins = np.fft.fft(samples.values) / n
        top = n // 2 - 1
        negative = bins[::-1][:top]
        return cls(bins[: top + 1], negative, name=name, samples=samples)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.real(self._holomorphic(z) + self._anti(np.conj(z)))

    def dz(self, z):
        return self._holomorphic.derivative()(np.asarray(z, dtype=complex))

    def boundary_mean(self, func: Callable) -> float:
        if self._samples is not None:
            values = np.real(self._samples.values)
        else:
            degree = max(self._holomorphic.degree, self._anti.degree)
            n = max(BOUNDARY_SAMPLES, angular_count(1.0, degree))
            values = self(np.exp(2j * np.pi * np.arange(n) / n))
        return float(np.mean(func(values)))


class ArcIndicator(HarmonicExtension):
    """Normalized indicator of the arc alpha < theta < beta, equal to 1/l there.

    Its extension is (1/l) times the harmonic measure of the arc, and
    d h/dz = (1/l) (1/(2 pi i)) (1/(e^(i alpha) - z) - 1/(e^(i beta) - z)).
    """

    def __init__(self, alpha: float, beta: float):
        if not 0.0 < beta - alpha < 2.0 * np.pi:
            raise DomainError(f"arc must satisfy 0 < beta - alpha < 2 pi, got ({alpha}, {beta})")
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.length = (self.beta - self.alpha) / (2.0 * np.pi)
        self.name = f"arc({alpha:g},{beta:g})"

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        a, b = np.exp(1j * self.alpha), np.exp(1j * self.beta)
        turn = np.exp(-1j * ((self.beta - self.alpha) / 2.0 + np.pi / 2.0))
        # the rotated angle stays in (-pi/2, pi/2), so the principal branch is continuous
        psi = np.angle((b - z) / (a - z) * turn)
        return (0.5 + psi / np.pi) / self.length

    def dz(self, z):
        z = np.asarray(z, dtype=complex)
        a, b = np.exp(1j * self.alpha), np.exp(1j * self.beta)
        return (1.0 / (a - z) - 1.0 / (b - z)) / (2j * np.pi * self.length)

    def boundary_mean(self, func: Callable) -> float:
        inside = np.asarray(func(np.array([1.0 / self.length, 0.0])), dtype=float)
        return float(self.length * inside[0] + (1.0 - self.length) * inside[1])


def cosine_density() -> PoissonExtension:
    """1 + cos(theta), extended as 1 + Re z."""
    return PoissonExtension([1.0, 0.5], name="1+cos")


@dataclass
class BoundaryDensity:
    """Nonnegative boundary samples with unit mean."""

    samples: CircleSamples

    def __post_init__(self):
        values = self.samples.values
        if self.samples.radius != 1.0:
            raise DomainError("a boundary density lives on the unit circle")
        if np.max(np.abs(values.imag)) > 1e-12 or np.min(values.real) < 0:
            raise DomainError("a boundary density must be real and nonnegative")
        if abs(np.mean(values.real) - 1.0) > 1e-9:
            raise DomainError(f"a boundary density must have unit mean, got {np.mean(values.real):.12g}")

    @classmethod
    def normalized(cls, values: Sequence[float]) -> "BoundaryDensity":
        values = np.asarray(values, dtype=float)
        total = np.mean(values)
        if total <= 0:
            raise DomainError("cannot normalize a density with zero mass")
        return cls(CircleSamples(1.0, values / total))

    @property
    def entropy(self) -> float:
        return float(np.mean(entropy_density(self.samples.values.real)))

    def extension(self) -> PoissonExtension:
        return PoissonExtension.from_samples(self.samples, name="density")


Harmonic = Union[HarmonicExtension, BoundaryDensity]


def _as_extension(h: Harmonic) -> HarmonicExtension:
    return h.extension() if isinstance(h, BoundaryDensity) else h


def _disk_mean(func: Callable[[np.ndarray], np.ndarray], scale: float = 1.0) -> float:
    """int func dA as a radial quad of circle means; ``scale`` is the outer
    radius at which func is singular, used to size the rings."""

    def radial(rho):
        n = min(angular_count(rho * scale), RING_ANGLES)
        return 2.0 * rho * float(np.real(circle_mean(func, rho, n)))

    value, _ = integrate.quad(radial, 0.0, 1.0, limit=200, epsabs=1e-11, epsrel=1e-9)
    return value


@dataclass
class PolynomialField:
    """u(z) = sum a[j, k] z^j conj(z)^k."""

    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.atleast_2d(np.asarray(self.coeffs, dtype=complex))

    @property
    def degree(self) -> int:
        j, k = np.nonzero(self.coeffs)
        return int(np.max(j + k)) if j.size else 0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for j, k in zip(*np.nonzero(self.coeffs)):
            out += self.coeffs[j, k] * z ** j * np.conj(z) ** k
        return out

    def laplacian(self) -> "PolynomialField":
        """d/dz d/dconj(z), the normalized Laplacian."""
        a = self.coeffs
        if min(a.shape) < 2:
            return PolynomialField(np.zeros((1, 1)))
        j = np.arange(1, a.shape[0])[:, None]
        k = np.arange(1, a.shape[1])[None, :]
        return PolynomialField(j * k * a[1:, 1:])


def green_identity_check(u: PolynomialField, tol: float = 1e-10) -> CheckResult:
    """int u dA + int (1 - |z|^2) Lap u dA = int u ds."""
    d = u.degree
    grid = gauss_legendre_grid(d // 2 + 4, next_power_of_two(max(64, 4 * (d + 2))))
    lap = u.laplacian()
    lhs = integrate_on_grid(u, grid) + integrate_on_grid(lambda z: (1.0 - np.abs(z) ** 2) * lap(z), grid)
    rhs = complex(np.mean(circle_values(u, 1.0, angular_count(1.0, d, minimum=64))))
    return CheckResult("Green identity", "Green formula with weight 1 - |z|^2",
                       lhs, rhs, abs(lhs - rhs) <= tol, f"degree {d}")


def green_energy_inequality(h: Harmonic, q: float) -> CheckResult:
    """int |h|^q dA + (q-1) int (1-|z|^2) |dh|^2 / |h|^(2-q) dA <= int |h|^q ds.

    Raises:
        DomainError: If q is not in (1, 2]
    """
    if not 1.0 < q <= 2.0:
        raise DomainError(f"the energy inequality needs 1 < q <= 2, got {q}")
    h = _as_extension(h)
    rhs = h.lq_boundary(q)
    if rhs == 0.0:
        return CheckResult("Green energy inequality", "energy of a Poisson extension",
                           0.0, 0.0, True, "skipped: h vanishes identically")

    def energy(z):
        value = np.abs(h(z))
        grad = (1.0 - np.abs(z) ** 2) * np.abs(h.dz(z)) ** 2
        weight = np.divide(grad, value ** (2.0 - q), out=np.zeros_like(grad), where=value > 0)
        return np.stack([value ** q, (q - 1.0) * weight])

    parts = [_disk_mean(lambda z, i=i: energy(z)[i]) for i in range(2)]
    lhs = float(sum(parts))
    return CheckResult("Green energy inequality", "energy of a Poisson extension",
                       lhs, rhs, lhs <= rhs * (1.0 + 1e-9), f"q={q} {h.name}",
                       extra={"area_term": parts[0], "gradient_term": parts[1]})


def gradient_norm(h: Harmonic, r: float) -> float:
    """||(dh)_r||_(A^1) = int |dh(r z)| dA(z)."""
    h = _as_extension(h)
    return _disk_mean(lambda z: np.abs(h.dz(r * z)), scale=r)


def anentropy_bound_check(h: Harmonic, r: float) -> CheckResult:
    """||(dh)_r||_(A^1) <= r^-2 (int h log h ds)^(1/2) sqrt(L(r))."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"radius must lie in (0, 1), got {r}")
    h = _as_extension(h)
    entropy = max(h.entropy(), 0.0)
    lhs = gradient_norm(h, r)
    rhs = math.sqrt(entropy) * math.sqrt(log_normalizer(r)) / r ** 2
    return CheckResult("anentropy bound", "gradient norm against differential anentropy",
                       lhs, rhs, lhs <= rhs + 1e-10, f"r={r} {h.name}",
                       extra={"entropy": entropy})


def hardy_entropy_bound_check(h: Harmonic, q: float, r: float) -> CheckResult:
    """||(dh)_r||_(A^1) <= r^-2 ||h||_1^(1-q/2) {(int|h|^q ds - int|h|^q dA)/(q-1)}^(1/2) sqrt(L)."""
    if not 1.0 < q <= 2.0:
        raise DomainError(f"the Hardy space bound needs 1 < q <= 2, got {q}")
    if not 0.0 < r < 1.0:
        raise DomainError(f"radius must lie in (0, 1), got {r}")
    h = _as_extension(h)
    l1 = h.lq_boundary(1.0)
    gap = h.lq_boundary(q) - _disk_mean(lambda z: np.abs(h(z)) ** q)
    lhs = gradient_norm(h, r)
    rhs = l1 ** (1.0 - q / 2.0) * math.sqrt(max(gap, 0.0) / (q - 1.0)) * math.sqrt(log_normalizer(r)) / r ** 2
    return CheckResult("Hardy space gradient bound", "gradient norm against the L^q energy gap",
                       lhs, rhs, lhs <= rhs + 1e-10, f"q={q} r={r}")


def level_set_bound(r: float, eta: float, mu_sup: float = 1.0,
                    max_sides: int = MAX_SIDES) -> Tuple[float, int]:
    """min over N >= 3 of N exp(-E cos^2(pi/N)), E = r^4 eta^2 / (||mu||^2 L), and its minimizer.

    log N - E cos^2(pi/N) has a single critical point, near N = pi sqrt(2E).
    Orders up to ``max_sides`` are scanned directly; when that point lies
    beyond them a window around it is added, so the minimum is exact for every
    E. The comparison is done on logarithms, so the bound may underflow to 0
    while the minimizer stays correct.
    """
    exponent = r ** 4 * eta ** 2 / (mu_sup ** 2 * log_normalizer(r))
    N = np.arange(3, max_sides + 1)
    centre = math.pi * math.sqrt(2.0 * exponent)
    if centre + 8 > max_sides:
        N = np.union1d(N, np.arange(max(3, math.floor(centre) - 8), math.ceil(centre) + 9))
    log_bounds = np.log(N) - exponent * np.cos(np.pi / N) ** 2
    i = int(np.argmin(log_bounds))
    return float(np.exp(log_bounds[i])), int(N[i])


def _dilate(g: HolomorphicFunction, r: float, n: Optional[int]) -> np.ndarray:
    degree = g.degree if isinstance(g, PowerSeries) else None
    n = angular_count(r, degree) if n is None else n
    return circle_values(g, r, n)


def level_set_check(g: HolomorphicFunction, r: float, eta: float, mu_sup: float = 1.0,
                    n: Optional[int] = None) -> LevelSetReport:
    """s-length of {|g(r zeta)| >= eta}, counted on the sample grid, against
    the polygon-optimized bound."""
    if eta < 0:
        raise DomainError(f"level must be nonnegative, got {eta}")
    values = _dilate(g, r, n)
    measured = float(np.count_nonzero(np.abs(values) >= eta)) / values.size
    bound, sides = level_set_bound(r, eta, mu_sup)
    logger.debug("level set r=%.6g eta=%.6g measured=%.6g bound=%.6g N=%d", r, eta, measured, bound, sides)
    return LevelSetReport(r, eta, measured, bound, sides)


def _single_exponent(r: float, eta: float, mu_sup: float) -> float:
    return math.exp(-(r ** 4) * eta ** 2 / (mu_sup ** 2 * log_normalizer(r)))


def weak_set_check(g: HolomorphicFunction, r: float, eta: float, mu_sup: float = 1.0,
                   n: Optional[int] = None) -> CheckResult:
    """|{Re(zeta g(r zeta)) >= eta}|_s <= exp(-r^4 eta^2 / (||mu||^2 L))."""
    values = _dilate(g, r, n)
    zeta = np.exp(2j * np.pi * np.arange(values.size) / values.size)
    lhs = float(np.count_nonzero(np.real(zeta * values) >= eta)) / values.size
    rhs = _single_exponent(r, eta, mu_sup)
    return CheckResult("weak-type set", "half-plane level set of the rotated dilate",
                       lhs, rhs, lhs <= rhs, f"r={r} eta={eta}")


def polygon_set_check(g: HolomorphicFunction, r: float, eta: float, N: int, mu_sup: float = 1.0,
                      n: Optional[int] = None) -> CheckResult:
    """|{max_k Re(omega^k zeta g(r zeta)) >= eta}|_s <= N exp(-r^4 eta^2/(||mu||^2 L))."""
    if N < 1:
        raise DomainError(f"polygon order must be positive, got {N}")
    values = _dilate(g, r, n)
    zeta = np.exp(2j * np.pi * np.arange(values.size) / values.size)
    omega = np.exp(2j * np.pi * np.arange(N) / N)
    best = np.max(np.real(omega[:, None] * (zeta * values)[None, :]), axis=0)
    lhs = float(np.count_nonzero(best >= eta)) / values.size
    rhs = N * _single_exponent(r, eta, mu_sup)
    return CheckResult("polygon set", "union of rotated half-plane sets",
                       lhs, rhs, lhs <= rhs, f"r={r} eta={eta} N={N}")


def polygon_containment_check(samples: Sequence[complex], eta: float, N: int) -> CheckResult:
    """|w| >= eta implies max_k Re(omega^k w) >= eta cos(pi/N), for N >= 3."""
    if N < 3:
        raise DomainError(f"polygon containment needs N >= 3, got {N}")
    w = np.asarray(samples, dtype=complex)
    omega = np.exp(2j * np.pi * np.arange(N) / N)
    best = np.max(np.real(omega[:, None] * w[None, :]), axis=0)
    inside = np.abs(w) >= eta
    violations = int(np.count_nonzero(inside & (best < eta * np.cos(np.pi / N) * (1.0 - 1e-12))))
    return CheckResult("polygon containment", "inscribed regular polygon",
                       float(violations), 0.0, violations == 0,
                       f"{int(np.count_nonzero(inside))} samples in the disk complement")


def ibp_identity_check(g: HolomorphicFunction, a: float, r: float, n: Optional[int] = None,
                       rtol: float = 1e-9) -> CheckResult:
    """I_g(a, r) = 1 + int exp(c eta^2) 2 c eta nu_r(eta) d eta with c = a r^4/L.

    nu_r is the measured distribution function of |g(r zeta)|; it is constant
    between consecutive sample moduli, where the integrand has the exact
    antiderivative exp(c eta^2).
    """
    values = np.abs(_dilate(g, r, n))
    lhs = tail_integral(g, a, r, values.size)
    c = a * r ** 4 / log_normalizer(r)
    levels = np.concatenate(([0.0], np.sort(values)))
    nu = 1.0 - np.arange(values.size) / values.size
    rhs = 1.0 + float(np.sum(nu * np.diff(np.exp(c * levels ** 2))))
    return CheckResult("integration by parts", "tail integral from the distribution function",
                       lhs, rhs, abs(lhs - rhs) <= rtol * abs(rhs), f"a={a} r={r}")


def strong_bound_N(a: float) -> Tuple[int, float]:
    """Smallest N >= pi sqrt(3)/sqrt(1-a) and the bound 1 + aN/(cos^2(pi/N) - a).

    Raises:
        DomainError: If a is not in (0, 1)
    """
    if not 0.0 < a < 1.0:
        raise DomainError(f"a must lie in (0, 1), got {a}")
    N = int(math.ceil(math.pi * math.sqrt(3.0) / math.sqrt(1.0 - a)))
    return N, 1.0 + a * N / (math.cos(math.pi / N) ** 2 - a)


def elementary_moment_inequality(s, y) -> CheckResult:
    """y^s <= s^s e^(-s+y) for s, y >= 0."""
    s = np.asarray(s, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(s < 0) or np.any(y < 0):
        raise DomainError("the moment inequality needs s, y >= 0")
    lhs = np.power(y, s)
    rhs = np.power(s, s) * np.exp(y - s)
    gap = lhs - rhs * (1.0 + 1e-12)
    worst = int(np.argmax(gap))
    return CheckResult("moment inequality", "power against exponential",
                       float(np.ravel(lhs)[worst]), float(np.ravel(rhs)[worst]), bool(np.all(gap <= 0)))


def carleman_check(f: PowerSeries, p: float) -> CheckResult:
    """||f||_(A^2p) <= ||f||_(H^p) for a polynomial f."""
    if p <= 0:
        raise DomainError(f"Carleman's inequality needs p > 0, got {p}")
    grid = gauss_legendre_grid(max(64, f.degree + 8), next_power_of_two(max(256, 16 * (f.degree + 1))))
    area = float(np.real(integrate_on_grid(lambda z: np.abs(f(z)) ** (2.0 * p), grid)))
    boundary = float(np.mean(np.abs(f.on_circle(1.0, angular_count(1.0, f.degree))) ** p))
    lhs = area ** (1.0 / (2.0 * p))
    rhs = boundary ** (1.0 / p)
    return CheckResult("Carleman inequality", "isoperimetric Bergman against Hardy norm",
                       lhs, rhs, lhs <= rhs * (1.0 + 1e-9), f"p={p}")
