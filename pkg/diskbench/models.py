"""Data models shared by the diskbench modules."""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DomainError, NonFiniteInputError

Number = Union[int, float, complex]

#: Default dyadic ladder exponents: r = 1 - 2**-m for m in [4, 20].
DEFAULT_LADDER = (4, 20)
#: Largest radius a ladder may contain in double precision.
LADDER_CAP = 1.0 - 1e-6


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def _as_finite_complex(values: Any, what: str = "input") -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInputError(what)
    return arr


def log_normalizer(r: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Return L(r) = log(1/(1 - r^2)), the normalizer of boundary dilates."""
    return -np.log1p(-np.square(r))


@dataclass
class CircleSamples:
    """Values of a function at the N equispaced points r*exp(2*pi*i*j/N)."""

    radius: float
    values: np.ndarray

    def __post_init__(self):
        self.values = _as_finite_complex(self.values)
        if self.values.ndim != 1:
            raise DomainError("circle samples must be one-dimensional")
        if not (np.isfinite(self.radius) and self.radius >= 0):
            raise DomainError(f"invalid circle radius: {self.radius}")
        n = self.values.size
        if n < 4 or not _is_power_of_two(n):
            raise DomainError(f"sample count must be a power of two >= 4, got {n}")

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n) / self.n

    @property
    def points(self) -> np.ndarray:
        return self.radius * np.exp(1j * self.angles)


@dataclass
class PolarGrid:
    """Radial nodes with weights for the measure 2r dr on [0, 1], plus an
    angular count.

    A disk integral is ``sum_i weights[i] * mean_theta f(radii[i], theta)``.
    """

    radii: np.ndarray
    weights: np.ndarray
    n_angles: int

    def __post_init__(self):
        self.radii = np.asarray(self.radii, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.radii.shape != self.weights.shape or self.radii.ndim != 1:
            raise DomainError("radii and weights must be matching 1-D arrays")
        if self.radii.size:
            if np.any(np.diff(self.radii) <= 0):
                raise DomainError("grid radii must be strictly increasing")
            if self.radii[0] < 0 or self.radii[-1] >= 1:
                raise DomainError("grid radii must lie in [0, 1)")
        if self.n_angles < 4 or not _is_power_of_two(self.n_angles):
            raise DomainError(
                f"angular count must be a power of two >= 4, got {self.n_angles}"
            )

    @classmethod
    def from_radii(cls, radii: np.ndarray, n_angles: int) -> "PolarGrid":
        """Build a grid from radii alone, using cell edges at the midpoints.

        Each node gets the exact 2r dr mass of its cell, e_{i+1}^2 - e_i^2.
        """
        radii = np.asarray(radii, dtype=float)
        edges = np.concatenate(([0.0], 0.5 * (radii[1:] + radii[:-1]), [1.0]))
        return cls(radii, np.diff(edges ** 2), n_angles)

    @property
    def shape(self):
        return (self.radii.size, self.n_angles)

    @property
    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_angles) / self.n_angles

    @property
    def points(self) -> np.ndarray:
        """Complex nodes as a (radius x angle) matrix."""
        return self.radii[:, None] * np.exp(1j * self.angles)[None, :]

    def __len__(self) -> int:
        return self.radii.size


@dataclass
class DiskField:
    """Samples of a complex function on a :class:`PolarGrid`."""

    grid: PolarGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = _as_finite_complex(self.values)
        if self.values.shape != self.grid.shape:
            raise DomainError(
                f"field shape {self.values.shape} does not match grid {self.grid.shape}"
            )

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0


class HolomorphicFunction(ABC):
    """A function holomorphic on the unit disk that can be evaluated and
    differentiated."""

    name: str = "g"

    @abstractmethod
    def __call__(self, z):
        """Evaluate at a scalar or an array of points."""

    @abstractmethod
    def derivative(self) -> "HolomorphicFunction":
        """Return the complex derivative."""


class PowerSeries(HolomorphicFunction):
    """Truncated Taylor series sum_j coeffs[j] z^j."""

    def __init__(self, coeffs: Any, name: str = "g"):
        arr = _as_finite_complex(np.atleast_1d(coeffs), "coefficients")
        if arr.ndim != 1 or arr.size == 0:
            raise DomainError("a power series needs at least one coefficient")
        self.coeffs = arr
        self.name = name

    def __repr__(self) -> str:
        return f"PowerSeries(name={self.name!r}, degree={self.degree})"

    @classmethod
    def monomial(cls, k: int, c: Number = 1.0) -> "PowerSeries":
        coeffs = np.zeros(k + 1, dtype=complex)
        coeffs[k] = c
        return cls(coeffs, name=f"z^{k}")

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        return npoly.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def derivative(self) -> "PowerSeries":
        if self.degree == 0:
            return PowerSeries([0.0], name=f"{self.name}'")
        j = np.arange(1, self.coeffs.size)
        return PowerSeries(self.coeffs[1:] * j, name=f"{self.name}'")

    def antiderivative(self, constant: Number = 0.0) -> "PowerSeries":
        j = np.arange(1, self.coeffs.size + 1)
        return PowerSeries(np.concatenate(([constant], self.coeffs / j)), self.name)

    def truncate(self, degree: int) -> "PowerSeries":
        coeffs = np.zeros(degree + 1, dtype=complex)
        m = min(degree + 1, self.coeffs.size)
        coeffs[:m] = self.coeffs[:m]
        return PowerSeries(coeffs, self.name)

    def shift(self, k: int) -> "PowerSeries":
        """Multiply by z^k; negative k divides and drops the low terms."""
        if k >= 0:
            return PowerSeries(np.concatenate((np.zeros(k), self.coeffs)), self.name)
        if -k > self.degree:
            return PowerSeries([0.0], self.name)
        return PowerSeries(self.coeffs[-k:], self.name)

    def _coerce(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return other
        return PowerSeries([other])

    def __add__(self, other) -> "PowerSeries":
        other = self._coerce(other)
        n = max(self.coeffs.size, other.coeffs.size)
        out = np.zeros(n, dtype=complex)
        out[: self.coeffs.size] += self.coeffs
        out[: other.coeffs.size] += other.coeffs
        return PowerSeries(out, self.name)

    __radd__ = __add__

    def __neg__(self) -> "PowerSeries":
        return PowerSeries(-self.coeffs, self.name)

    def __sub__(self, other) -> "PowerSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PowerSeries":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return PowerSeries(np.convolve(self.coeffs, other.coeffs), self.name)
        return PowerSeries(self.coeffs * other, self.name)

    __rmul__ = __mul__

    def reciprocal(self, degree: Optional[int] = None) -> "PowerSeries":
        """Taylor coefficients of 1/f up to ``degree``."""
        degree = self.degree if degree is None else degree
        a = self.truncate(degree).coeffs
        if a[0] == 0:
            raise DomainError("series with zero constant term has no reciprocal")
        b = np.zeros(degree + 1, dtype=complex)
        b[0] = 1.0 / a[0]
        for n in range(1, degree + 1):
            b[n] = -np.dot(a[1 : n + 1], b[n - 1 :: -1][:n]) / a[0]
        return PowerSeries(b, f"1/{self.name}")

    def log(self, degree: Optional[int] = None) -> "PowerSeries":
        """Principal logarithm as a series (the constant is the principal log
        of the constant term)."""
        degree = self.degree if degree is None else degree
        if self.coeffs[0] == 0:
            raise DomainError("series with zero constant term has no logarithm")
        quotient = (self.derivative() * self.reciprocal(degree)).truncate(degree)
        result = quotient.antiderivative(np.log(self.coeffs[0])).truncate(degree)
        return PowerSeries(result.coeffs, f"log {self.name}")

    def exp(self, degree: Optional[int] = None) -> "PowerSeries":
        degree = self.degree if degree is None else degree
        f = self.truncate(degree).coeffs
        kf = np.arange(degree + 1) * f
        e = np.zeros(degree + 1, dtype=complex)
        e[0] = np.exp(f[0])
        for n in range(1, degree + 1):
            e[n] = np.dot(kf[1 : n + 1], e[n - 1 :: -1][:n]) / n
        return PowerSeries(e, f"exp {self.name}")

    def on_circle(self, r: float, n: int) -> np.ndarray:
        """Values at r*exp(2*pi*i*j/n) by one inverse FFT.

        Coefficients beyond n are folded into their aliased bins, so the
        result is exact for any degree.
        """
        j = np.arange(self.coeffs.size)
        scaled = self.coeffs * np.power(float(r), j)
        folded = np.zeros(n, dtype=complex)
        np.add.at(folded, j % n, scaled)
        return n * np.fft.ifft(folded)

    def l2_circle_norm_sq(self, r: float) -> float:
        """Parseval value of the circle mean of |f(r zeta)|^2."""
        j = np.arange(self.coeffs.size)
        return float(np.sum(np.abs(self.coeffs) ** 2 * np.power(float(r), 2 * j)))


class ClosedFormFunction(HolomorphicFunction):
    """A holomorphic function given by vectorized callables."""

    def __init__(
        self,
        value: Callable[[Any], Any],
        derivative: Optional[Callable[[Any], Any]] = None,
        name: str = "g",
        series: Optional[Callable[[int], PowerSeries]] = None,
    ):
        self._value = value
        self._derivative = derivative
        self._series = series
        self.name = name

    def __repr__(self) -> str:
        return f"ClosedFormFunction(name={self.name!r})"

    def __call__(self, z):
        return self._value(np.asarray(z, dtype=complex))

    def derivative(self) -> "ClosedFormFunction":
        if self._derivative is None:
            raise NotImplementedError(f"no derivative known for {self.name}")
        return ClosedFormFunction(self._derivative, name=f"{self.name}'")

    def series(self, degree: int) -> PowerSeries:
        """Taylor polynomial of the requested degree, when one is known."""
        if self._series is None:
            raise NotImplementedError(f"no series known for {self.name}")
        return self._series(degree)


@dataclass
class ProjectionResult:
    """Bergman projection as a series plus a truncation residual."""

    series: PowerSeries
    residual: float

    def __post_init__(self):
        if not self.residual >= 0:
            raise DomainError("residual must be non-negative")

    def __call__(self, z):
        return self.series(z)


@dataclass
class BlochFunction:
    series: PowerSeries
    seminorm_estimate: float


@dataclass
class Decomposition:
    """The split g = z^2 P(nu) + G of a Bloch function."""

    nu: DiskField
    G: PowerSeries
    residual: float
    nu_sup: float
    G_sup: float


@dataclass
class RadiiLadder:
    """Increasing radii approaching the unit circle."""

    radii: np.ndarray

    def __post_init__(self):
        self.radii = np.asarray(self.radii, dtype=float)
        if self.radii.ndim != 1 or self.radii.size == 0:
            raise DomainError("a radii ladder needs at least one radius")
        if np.any(np.diff(self.radii) <= 0):
            raise DomainError("ladder radii must be strictly increasing")
        if self.radii[0] <= 0 or self.radii[-1] >= 1:
            raise DomainError("ladder radii must lie in (0, 1)")

    @classmethod
    def dyadic(
        cls, m_min: int = DEFAULT_LADDER[0], m_max: int = DEFAULT_LADDER[1],
        cap: float = LADDER_CAP,
    ) -> "RadiiLadder":
        """Radii 1 - 2**-m for m in [m_min, m_max], clipped at ``cap``."""
        if m_min < 1 or m_max < m_min:
            raise DomainError(f"invalid ladder range {m_min}:{m_max}")
        radii = np.minimum(1.0 - 2.0 ** -np.arange(m_min, m_max + 1, dtype=float), cap)
        return cls(np.unique(radii))

    @property
    def L(self) -> np.ndarray:
        return log_normalizer(self.radii)

    def tail(self, count: int) -> np.ndarray:
        return self.radii[-count:]

    def __len__(self) -> int:
        return self.radii.size

    def __iter__(self):
        return iter(self.radii)


@dataclass
class SweepRow:
    parameter: float
    radius: float
    value: float
    flagged: bool = False


@dataclass
class SweepTable:
    """(parameter, radius, value) rows of a radii-ladder experiment."""

    parameter_name: str = "a"
    rows: List[SweepRow] = None

    def __post_init__(self):
        if self.rows is None:
            self.rows = []

    def add(self, parameter: float, radius: float, value: float, flagged: bool = False):
        self.rows.append(SweepRow(parameter, radius, value, flagged))

    def values_for(self, parameter: float) -> np.ndarray:
        return np.array([row.value for row in self.rows if row.parameter == parameter])

    @property
    def flagged_rows(self) -> List[SweepRow]:
        return [row for row in self.rows if row.flagged]

    def to_records(self) -> List[Dict[str, Any]]:
        return [
            {
                self.parameter_name: row.parameter,
                "r": row.radius,
                "value": row.value,
                "flagged": row.flagged,
            }
            for row in self.rows
        ]


@dataclass
class SpectrumEstimate:
    t: complex
    beta_hat: float
    fit_residual: float
    n_used: int = 0
    n_dropped: int = 0


@dataclass
class LevelSetReport:
    r: float
    eta: float
    measured_length: float
    bound: float
    n_sides: int = 3

    @property
    def holds(self) -> bool:
        return self.measured_length <= self.bound


@dataclass
class MotionSeries:
    """Coefficients H_j of log dPsi(lambda, .) in powers of lambda, on |zeta| = R."""

    R: float
    coefficients: List[CircleSamples]
    tail_magnitude: float = 0.0
    contour_radius: float = 0.5

    def __post_init__(self):
        if not self.R > 1:
            raise DomainError(f"motion coefficients need R > 1, got {self.R}")
        if not self.coefficients:
            raise DomainError("a motion series needs at least one coefficient")

    @property
    def J(self) -> int:
        return len(self.coefficients)

    def coefficient(self, j: int) -> CircleSamples:
        """Coefficient H_j, counted from j = 1."""
        return self.coefficients[j - 1]

    def evaluate(self, lam: complex) -> np.ndarray:
        """Truncated H(lambda, R zeta) = sum_j lambda^j H_j on the circle."""
        total = np.zeros(self.coefficients[0].n, dtype=complex)
        for j, samples in enumerate(self.coefficients, start=1):
            total += lam ** j * samples.values
        return total


@dataclass
class SpectrumBound:
    k: float
    t: complex
    bound: float
    branch: str = "quadratic"


@dataclass
class DimensionReport:
    k: float
    k_prime: float
    t_k: float
    F_at_root: float
    derivative_sign: float
    asymptotic_gap: float


@dataclass
class CheckResult:
    """Outcome of one inequality or identity check."""

    name: str
    reference: str
    lhs: float
    rhs: float
    passed: bool
    detail: str = ""
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return float(self.rhs - self.lhs)

    def to_record(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "reference": self.reference,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "passed": self.passed,
            "detail": self.detail,
        }
