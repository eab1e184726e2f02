"""Bounded symbols on the unit disk.

A symbol is a function mu in L-infinity of the disk, extended by zero
outside. Closed-form symbols know their exact area moments, everything else
falls back to polar quadrature in :mod:`diskbench.transforms`.
"""

import json
import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .errors import SymbolError
from .grids import gauss_legendre_grid
from .models import DiskField, HolomorphicFunction, PolarGrid, PowerSeries

logger = logging.getLogger(__name__)

#: Quadrature grid used for symbols without closed-form moments.
DEFAULT_RADIAL_NODES = 96
DEFAULT_ANGLES = 256


class Symbol(ABC):
    """A bounded function on the unit disk."""

    name: str = "mu"

    @abstractmethod
    def __call__(self, w: np.ndarray) -> np.ndarray:
        """Values at points of the disk."""

    @abstractmethod
    def sup_norm(self) -> float:
        """Essential supremum of |mu|."""

    def reflect(self) -> "Symbol":
        """The symbol mu*(w) = mu(conj(w))."""
        return ReflectedSymbol(self)

    def sample(self, grid: PolarGrid) -> DiskField:
        with np.errstate(all="ignore"):
            values = np.asarray(self(grid.points), dtype=complex) * np.ones(grid.shape)
        return DiskField(grid, values)

    def default_grid(self) -> PolarGrid:
        return gauss_legendre_grid(DEFAULT_RADIAL_NODES, DEFAULT_ANGLES)

    def exact_antiholomorphic_moments(self, J: int) -> Optional[np.ndarray]:
        """Integrals of mu(w) conj(w)^j dA for j = 0..J, if known in closed form."""
        return None

    def exact_holomorphic_moments(self, J: int) -> Optional[np.ndarray]:
        """Integrals of mu(w) w^n dA for n = 0..J, if known in closed form."""
        return None

    def projection(self) -> Optional[HolomorphicFunction]:
        """Closed-form Bergman projection, if one exists."""
        return None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"


class ConstantSymbol(Symbol):
    def __init__(self, c: complex = 1.0, name: Optional[str] = None):
        self.c = complex(c)
        self.name = name or f"const:{c}"

    def __call__(self, w):
        return np.full(np.shape(w), self.c, dtype=complex)

    def sup_norm(self) -> float:
        return abs(self.c)

    def reflect(self) -> "Symbol":
        return self

    def _delta(self, J: int) -> np.ndarray:
        out = np.zeros(J + 1, dtype=complex)
        out[0] = self.c
        return out

    exact_antiholomorphic_moments = _delta
    exact_holomorphic_moments = _delta

    def projection(self) -> PowerSeries:
        return PowerSeries([self.c], name=self.name)


class MonomialSymbol(Symbol):
    """mu(w) = w^m conj(w)^k."""

    def __init__(self, m: int, k: int):
        if m < 0 or k < 0:
            raise SymbolError(f"monomial exponents must be non-negative: {m},{k}")
        self.m, self.k = int(m), int(k)
        self.name = "conj" if (m, k) == (0, 1) else f"monomial:{m},{k}"

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        return w ** self.m * np.conj(w) ** self.k

    def sup_norm(self) -> float:
        return 1.0

    def reflect(self) -> "Symbol":
        return MonomialSymbol(self.k, self.m)

    def exact_antiholomorphic_moments(self, J: int) -> np.ndarray:
        out = np.zeros(J + 1, dtype=complex)
        j = self.m - self.k
        if 0 <= j <= J:
            out[j] = 1.0 / (self.m + 1)
        return out

    def exact_holomorphic_moments(self, J: int) -> np.ndarray:
        out = np.zeros(J + 1, dtype=complex)
        n = self.k - self.m
        if 0 <= n <= J:
            out[n] = 1.0 / (self.k + 1)
        return out

    def projection(self) -> PowerSeries:
        j = self.m - self.k
        if j < 0:
            return PowerSeries([0.0], name=f"P[{self.name}]")
        return PowerSeries.monomial(j, (j + 1.0) / (self.m + 1))


class RadialPowerSymbol(Symbol):
    """mu(w) = |w|^p."""

    def __init__(self, p: float):
        if p < 0:
            raise SymbolError(f"radial power must be non-negative, got {p}")
        self.p = float(p)
        self.name = f"radial:{p:g}"

    def __call__(self, w):
        return np.abs(np.asarray(w, dtype=complex)) ** self.p + 0j

    def sup_norm(self) -> float:
        return 1.0

    def reflect(self) -> "Symbol":
        return self

    def _radial(self, J: int) -> np.ndarray:
        out = np.zeros(J + 1, dtype=complex)
        out[0] = 2.0 / (self.p + 2.0)
        return out

    exact_antiholomorphic_moments = _radial
    exact_holomorphic_moments = _radial

    def projection(self) -> PowerSeries:
        return PowerSeries([2.0 / (self.p + 2.0)], name=f"P[{self.name}]")


class PhaseSymbol(Symbol):
    """Unimodular symbol exp(i phi(w)) with phi = Re sum_k c_k w^k.

    The coefficients c_1..c_degree are drawn from a seeded normal
    distribution, so the symbol is reproducible from its seed.
    """

    def __init__(self, seed: int = 0, degree: int = 4, scale: float = 2.0):
        self.seed = int(seed)
        rng = np.random.default_rng(self.seed)
        self.coeffs = scale * (
            rng.standard_normal(degree) + 1j * rng.standard_normal(degree)
        ) / np.sqrt(2.0)
        self.name = f"phase:{seed}"

    def phi(self, w):
        w = np.asarray(w, dtype=complex)
        total = np.zeros(w.shape, dtype=complex)
        for k, c in enumerate(self.coeffs, start=1):
            total = total + c * w ** k
        return total.real

    def __call__(self, w):
        return np.exp(1j * self.phi(w))

    def sup_norm(self) -> float:
        return 1.0


class FunctionSymbol(Symbol):
    """Symbol given by a vectorized callable.

    Without an explicit ``bound`` the sup norm is estimated on probe rings
    that accumulate at the unit circle; a non-finite estimate means the
    callable is not bounded.
    """

    def __init__(self, func: Callable[[np.ndarray], np.ndarray], name: str = "custom",
                 bound: Optional[float] = None):
        self.func = func
        self.name = name
        self.bound = bound

    def __call__(self, w):
        return np.asarray(self.func(np.asarray(w, dtype=complex)), dtype=complex)

    def sup_norm(self) -> float:
        if self.bound is not None:
            return float(self.bound)
        radii = np.concatenate(([0.0], 1.0 - 2.0 ** -np.arange(1, 27)))
        points = radii[:, None] * np.exp(2j * np.pi * np.arange(64) / 64)[None, :]
        with np.errstate(all="ignore"):
            values = np.abs(self(points))
        if not np.all(np.isfinite(values)):
            return float("inf")
        return float(np.max(values))


class FieldSymbol(Symbol):
    """Symbol sampled on a polar grid, interpolated in (r, theta)."""

    def __init__(self, field: DiskField, name: str = "field"):
        self.field = field
        self.name = name
        grid = field.grid
        theta = np.concatenate((grid.angles, [2.0 * np.pi]))
        values = np.concatenate((field.values, field.values[:, :1]), axis=1)
        self._interp_re = RegularGridInterpolator(
            (grid.radii, theta), values.real, bounds_error=False, fill_value=None
        )
        self._interp_im = RegularGridInterpolator(
            (grid.radii, theta), values.imag, bounds_error=False, fill_value=None
        )

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        grid = self.field.grid
        r = np.clip(np.abs(w), grid.radii[0], grid.radii[-1])
        theta = np.mod(np.angle(w), 2.0 * np.pi)
        pts = np.stack((r.ravel(), theta.ravel()), axis=-1)
        values = self._interp_re(pts) + 1j * self._interp_im(pts)
        return values.reshape(w.shape)

    def sup_norm(self) -> float:
        return self.field.sup_norm

    def default_grid(self) -> PolarGrid:
        return self.field.grid

    def sample(self, grid: PolarGrid) -> DiskField:
        if grid is self.field.grid:
            return self.field
        return super().sample(grid)

    def reflect(self) -> "Symbol":
        n = self.field.grid.n_angles
        index = (-np.arange(n)) % n
        return FieldSymbol(DiskField(self.field.grid, self.field.values[:, index]),
                           name=f"{self.name}*")


class ReflectedSymbol(Symbol):
    """mu*(w) = mu(conj(w)); reflection swaps the two moment families."""

    def __init__(self, base: Symbol):
        self.base = base
        self.name = f"{base.name}*"

    def __call__(self, w):
        return self.base(np.conj(np.asarray(w, dtype=complex)))

    def sup_norm(self) -> float:
        return self.base.sup_norm()

    def reflect(self) -> Symbol:
        return self.base

    def default_grid(self) -> PolarGrid:
        return self.base.default_grid()

    def exact_antiholomorphic_moments(self, J: int) -> Optional[np.ndarray]:
        return self.base.exact_holomorphic_moments(J)

    def exact_holomorphic_moments(self, J: int) -> Optional[np.ndarray]:
        return self.base.exact_antiholomorphic_moments(J)


def load_symbol_file(path: str) -> FieldSymbol:
    """Load a symbol sampled on a polar grid from JSON.

    The file holds ``radii`` (increasing, in (0, 1)), ``n_angles`` and
    ``values``: row-major [re, im] pairs, one row of n_angles per radius.

    Raises:
        SymbolError: If the file is missing or malformed
    """
    file_path = Path(path)
    if not file_path.exists():
        raise SymbolError(f"Symbol file not found: {path}")
    try:
        with open(file_path) as f:
            data = json.load(f)
        radii = np.asarray(data["radii"], dtype=float)
        n_angles = int(data["n_angles"])
        pairs = np.asarray(data["values"], dtype=float).reshape(radii.size, n_angles, 2)
    except (KeyError, ValueError, TypeError) as e:
        raise SymbolError(f"Malformed symbol file {path}: {e}") from e
    grid = PolarGrid.from_radii(radii, n_angles)
    return FieldSymbol(DiskField(grid, pairs[..., 0] + 1j * pairs[..., 1]),
                       name=f"file:{file_path.name}")


def _extremal() -> Symbol:
    from .extremal import ExtremalSymbol

    return ExtremalSymbol()


_NAMED: Dict[str, Callable[[], Symbol]] = {
    "zero": lambda: ConstantSymbol(0.0, name="zero"),
    "one": lambda: ConstantSymbol(1.0, name="one"),
    "disk": lambda: ConstantSymbol(1.0, name="one"),
    "conj": lambda: MonomialSymbol(0, 1),
    "mu0": _extremal,
    "mu0*": lambda: _extremal().reflect(),
}

SYMBOL_KINDS: List[str] = [
    "zero", "one", "const:c", "mu0", "mu0*", "conj", "monomial:m,k",
    "radial:p", "phase:seed", "file:path",
]


def get_symbol(text: str) -> Symbol:
    """Build a symbol from its command-line description.

    Args:
        text: One of ``zero``, ``one``, ``const:c``, ``mu0``, ``mu0*``,
            ``conj``, ``monomial:m,k``, ``radial:p``, ``phase:seed`` or
            ``file:path``

    Returns:
        Symbol instance

    Raises:
        SymbolError: If the description is not recognised
    """
    text = text.strip()
    if text in _NAMED:
        return _NAMED[text]()
    kind, _, arg = text.partition(":")
    try:
        if kind == "const":
            return ConstantSymbol(complex(arg.replace(" ", "")), name=text)
        if kind == "monomial":
            m, k = (int(part) for part in arg.split(","))
            return MonomialSymbol(m, k)
        if kind == "radial":
            return RadialPowerSymbol(float(arg))
        if kind == "phase":
            return PhaseSymbol(int(arg))
        if kind == "file":
            return load_symbol_file(arg)
    except ValueError as e:
        if isinstance(e, SymbolError):
            raise
        raise SymbolError(f"Invalid symbol argument in '{text}': {e}") from e
    raise SymbolError(
        f"Unsupported symbol: {text}. Choose from: {', '.join(SYMBOL_KINDS)}"
    )


def symbol_corpus(seed: int = 0, n_phase: int = 10) -> List[Symbol]:
    """Test corpus of symbols with sup norm at most one.

    Constants, the extremal symbol and its reflection, conjugate monomials,
    radial powers and ``n_phase`` seeded phase symbols.
    """
    corpus: List[Symbol] = [
        ConstantSymbol(0.0, name="zero"),
        ConstantSymbol(1.0, name="one"),
        ConstantSymbol(-1.0, name="const:-1"),
        ConstantSymbol(1j, name="const:1j"),
        ConstantSymbol(0.5, name="const:0.5"),
        _extremal(),
        _extremal().reflect(),
    ]
    corpus += [MonomialSymbol(0, k) for k in (1, 2, 3)]
    corpus += [MonomialSymbol(2, 0), RadialPowerSymbol(1.0), RadialPowerSymbol(2.0)]
    corpus += [PhaseSymbol(seed + i) for i in range(n_phase)]
    return corpus
