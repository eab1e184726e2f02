"""Quadrature and series infrastructure on the unit disk.

Circle means are FFT-exact for trigonometric polynomials below the Nyquist
degree; disk integrals are polar products of a radial rule for 2r dr on
[0, 1] with equispaced angles.
"""

import logging
import math
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, NonFiniteInputError
from .models import (
    CircleSamples,
    DiskField,
    HolomorphicFunction,
    PolarGrid,
    PowerSeries,
)

logger = logging.getLogger(__name__)

MIN_ANGLES = 256
#: Largest number of circle samples materialized at once.
CHUNK = 2 ** 18
MAX_ANGLES = 2 ** 24


def next_power_of_two(n: float) -> int:
    return 1 << max(2, int(math.ceil(math.log2(max(n, 1.0)))))


def angular_count(r: float, degree: Optional[int] = None, minimum: int = MIN_ANGLES) -> int:
    """Angular resolution for a boundary dilate at radius ``r``.

    Returns the smallest power of two >= max(minimum, 16/|1 - r|). For a
    polynomial of known degree the peak width is set by the degree, so the
    radius term is capped at 64*(degree + 1).
    """
    gap = abs(1.0 - r)
    width = 16.0 / gap if gap > 0 else float("inf")
    if degree is not None:
        width = min(width, 64.0 * (degree + 1))
    if not np.isfinite(width):
        raise DomainError("angular count undefined on the unit circle")
    n = next_power_of_two(max(minimum, width))
    if n > MAX_ANGLES:
        logger.debug("angular count %d clipped to %d at r=%.12g", n, MAX_ANGLES, r)
        n = MAX_ANGLES
    return n


def circle_points(r: float, n: int, start: int = 0, stop: Optional[int] = None) -> np.ndarray:
    stop = n if stop is None else stop
    return r * np.exp(2j * np.pi * np.arange(start, stop) / n)


def circle_values(g: Callable, r: float, n: int) -> np.ndarray:
    """Values of ``g`` at the n equispaced points of the circle of radius r."""
    if isinstance(g, PowerSeries):
        return g.on_circle(r, n)
    return np.asarray(g(circle_points(r, n)), dtype=complex)


def sample_circle(g: Callable, r: float, n: Optional[int] = None) -> CircleSamples:
    if n is None:
        degree = g.degree if isinstance(g, PowerSeries) else None
        n = angular_count(r, degree)
    return CircleSamples(r, circle_values(g, r, n))


def circle_mean(
    func: Callable[[np.ndarray], np.ndarray],
    r: float,
    n: int,
    chunk: int = CHUNK,
):
    """Mean of ``func`` over n equispaced points of the circle |z| = r.

    ``func`` receives a 1-D array of points. It may return an array of the
    same length, or a (k, len) array for k integrands at once, in which
    case a length-k vector of means is returned. Points are generated in
    chunks so very fine circles never materialize more than ``chunk``
    samples.
    """
    total = None
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        vals = np.asarray(func(circle_points(r, n, start, stop)))
        part = np.sum(vals, axis=-1)
        total = part if total is None else total + part
    return total / n


def circle_integral(f: CircleSamples) -> complex:
    """Normalized arc-length integral of circle samples.

    Raises:
        NonFiniteInputError: If any sample is NaN or infinite.
    """
    values = np.asarray(f.values)
    if not np.all(np.isfinite(values)):
        raise NonFiniteInputError("input")
    return complex(np.mean(values))


def disk_integral(f: DiskField) -> complex:
    """Normalized area integral of a field on a polar grid.

    Raises:
        DomainError: If the grid has no radii.
    """
    if len(f.grid) == 0:
        raise DomainError("cannot integrate over an empty grid")
    means = np.mean(f.values, axis=1)
    return complex(np.sum(f.grid.weights * means))


def integrate_on_grid(func: Callable[[np.ndarray], np.ndarray], grid: PolarGrid) -> complex:
    """Disk integral of a vectorized function sampled on ``grid``."""
    return disk_integral(DiskField(grid, func(grid.points)))


def taylor_from_circle(f: CircleSamples, degree: Optional[int] = None) -> PowerSeries:
    """Taylor coefficients from samples of a holomorphic function on a circle.

    Args:
        f: Samples at radius r of a function holomorphic on a larger disk
        degree: Highest coefficient to return; at most N/2 - 1

    Returns:
        PowerSeries whose j-th coefficient is FFT bin j divided by r^j

    Raises:
        DomainError: If the radius is zero
    """
    if f.radius == 0:
        raise DomainError("cannot extract Taylor coefficients at radius 0")
    top = f.n // 2 - 1 if degree is None else min(degree, f.n // 2 - 1)
    bins = np.fft.fft(f.values)[: top + 1] / f.n
    return PowerSeries(bins / np.power(float(f.radius), np.arange(top + 1)))


def angular_modes(f: DiskField) -> np.ndarray:
    """Angular Fourier coefficients per radius, shape (n_r, n_angles).

    Column k holds the mode exp(i k theta) for k < n/2 and exp(i (k-n) theta)
    above.
    """
    return np.fft.fft(f.values, axis=1) / f.grid.n_angles


def field_moments(f: DiskField, J: int, holomorphic: bool = False) -> np.ndarray:
    """Area moments of a sampled field, j = 0..J.

    The antiholomorphic moment of f against conj(w)^j only sees the angular
    mode exp(i j theta); the holomorphic moment against w^n sees the mode
    exp(-i n theta).

    Raises:
        DomainError: If J reaches the Nyquist mode of the grid
    """
    n_a = f.grid.n_angles
    if J >= n_a // 2:
        raise DomainError(
            f"moment degree {J} needs more than {n_a} angles (at most {n_a // 2 - 1})"
        )
    modes = angular_modes(f)
    j = np.arange(J + 1)
    cols = (-j) % n_a if holomorphic else j
    powers = np.power(f.grid.radii[:, None], j[None, :])
    return np.sum(f.grid.weights[:, None] * powers * modes[:, cols], axis=0)


def field_from_modes(grid: PolarGrid, modes: np.ndarray) -> DiskField:
    return DiskField(grid, np.fft.ifft(modes, axis=1) * grid.n_angles)


def gauss_legendre_grid(n_r: int, n_a: int, interval: Tuple[float, float] = (0.0, 1.0)) -> PolarGrid:
    """Gauss-Legendre radii on ``interval`` with weights for 2r dr."""
    if n_r < 1:
        raise DomainError("a radial rule needs at least one node")
    a, b = interval
    x, w = np.polynomial.legendre.leggauss(n_r)
    radii = a + (b - a) * (x + 1.0) / 2.0
    return PolarGrid(radii, w * (b - a) * radii, n_a)


def composite_gauss_grid(n_r: int, n_a: int, breaks: Sequence[float] = (0.0, 0.5, 1.0)) -> PolarGrid:
    """Gauss-Legendre rule with ``n_r`` nodes on each panel between ``breaks``.

    Used for radial profiles with a kink, such as the piecewise weight of the
    Bloch decomposition.
    """
    radii, weights = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        panel = gauss_legendre_grid(n_r, n_a, (a, b))
        radii.append(panel.radii)
        weights.append(panel.weights)
    return PolarGrid(np.concatenate(radii), np.concatenate(weights), n_a)


def midpoint_grid(n_r: int, n_a: int) -> PolarGrid:
    """Cell-centred radii (i + 1/2)/n_r with weights 2 r_i / n_r."""
    if n_r < 1:
        raise DomainError("a radial rule needs at least one node")
    h = 1.0 / n_r
    radii = (np.arange(n_r) + 0.5) * h
    return PolarGrid(radii, 2.0 * radii * h, n_a)


def field_from_function(func: Callable[[np.ndarray], np.ndarray], grid: PolarGrid) -> DiskField:
    return DiskField(grid, np.asarray(func(grid.points), dtype=complex))


def max_on_circles(
    g: HolomorphicFunction, radii: Sequence[float], n: Optional[int] = None
) -> float:
    """Largest modulus of ``g`` over a set of circles."""
    best = 0.0
    for r in radii:
        samples = sample_circle(g, r, n)
        best = max(best, float(np.max(np.abs(samples.values))))
    return best
