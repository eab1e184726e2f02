"""Tests for the Bergman, Cauchy and Beurling transforms."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diskbench.errors import DomainError, SupportBoundaryError, SymbolError
from diskbench.extremal import mu0_projection
from diskbench.grids import field_from_function, gauss_legendre_grid, midpoint_grid
from diskbench.models import PowerSeries
from diskbench.symbols import ConstantSymbol, FunctionSymbol, MonomialSymbol, PhaseSymbol, get_symbol
from diskbench.transforms import (
    PERALA_CONSTANT,
    beurling_exterior_series,
    beurling_transform_exterior,
    beurling_transform_interior,
    bergman_project,
    bloch_image_check,
    cauchy_transform,
    circle_disk_identity_check,
    dilate_symmetry_check,
    mobius,
    pointwise_bound_check,
    pointwise_projection_bound,
    projection_function,
)


@pytest.fixture
def disk_points():
    """100 points with |z| <= 0.99."""
    radii = np.linspace(0.0, 0.99, 10)
    angles = 2 * np.pi * np.arange(10) / 10
    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()


def test_projection_of_extremal_symbol(disk_points):
    """P mu0 = (1/z^2) log(1/(1-z)) - 1/z."""
    result = bergman_project(get_symbol("mu0"), 4096)
    assert np.max(np.abs(result(disk_points) - mu0_projection(disk_points))) < 1e-8
    assert result.residual == pytest.approx(1.0 / 4098)


def test_projection_by_quadrature_matches_exact_moments():
    mu = MonomialSymbol(3, 1)
    exact = bergman_project(mu, 8).series.coeffs
    numeric = bergman_project(mu, 8, grid=gauss_legendre_grid(32, 64)).series.coeffs
    assert np.allclose(exact, numeric, atol=1e-12)
    assert exact[2] == pytest.approx(0.75)


def test_projection_errors():
    with pytest.raises(SymbolError, match="symbol not in L∞"):
        bergman_project(FunctionSymbol(lambda w: 1.0 / np.abs(w)), 4)
    with pytest.raises(DomainError, match="non-negative"):
        bergman_project(ConstantSymbol(1.0), -1)


def test_projection_function_prefers_closed_form():
    assert projection_function(get_symbol("mu0")).name == "P[mu0]"
    assert isinstance(projection_function(PhaseSymbol(0), 16), PowerSeries)


def test_cauchy_transform_of_disk():
    """C 1_D is conj(zeta) inside and 1/zeta outside."""
    one = ConstantSymbol(1.0)
    assert cauchy_transform(one, 0.5 + 0.2j) == pytest.approx(0.5 - 0.2j, abs=1e-10)
    assert cauchy_transform(one, 2.0 - 1.0j) == pytest.approx(1.0 / (2.0 - 1.0j))
    with pytest.raises(SupportBoundaryError, match="too close to support boundary"):
        cauchy_transform(one, 1.005)


def test_cauchy_transform_by_quadrature():
    """A symbol without closed forms falls back to quadrature."""
    # outside the disk C(w) vanishes and C(conj w) = 1/(2 zeta^2)
    mu = FunctionSymbol(lambda w: w, bound=1.0)
    assert cauchy_transform(mu, 2.0j) == pytest.approx(0.0, abs=1e-12)
    mu = FunctionSymbol(lambda w: np.conj(w), bound=1.0)
    assert cauchy_transform(mu, 2.0) == pytest.approx(0.125, abs=1e-12)


def test_beurling_exterior():
    """S 1_D = -1/zeta^2 outside the disk; the series form agrees."""
    one = ConstantSymbol(1.0)
    assert beurling_transform_exterior(one, 2.0) == pytest.approx(-0.25)
    mu0 = get_symbol("mu0")
    zeta = np.array([1.5, -2.0 + 1.0j, 3.0j])
    series = beurling_exterior_series(mu0, 8)
    assert np.allclose(series(1.0 / zeta), beurling_transform_exterior(mu0, zeta))
    assert np.allclose(series.coeffs[:4], [0, 0, -0.5, 1.0])
    with pytest.raises(DomainError, match="interior evaluation"):
        beurling_transform_exterior(one, 0.5)


def test_beurling_interior_kills_constants():
    grid = midpoint_grid(32, 32)
    field = field_from_function(lambda w: np.ones_like(w), grid)
    assert np.max(np.abs(beurling_transform_interior(field).values)) < 1e-12
    with pytest.raises(DomainError, match="midpoint grid"):
        beurling_transform_interior(field_from_function(lambda w: w, gauss_legendre_grid(8, 16)))


def test_mobius():
    assert mobius(0.3, 0.3) == 0
    z = np.array([0.1, -0.5j, 0.7 + 0.1j])
    assert np.allclose(mobius(0.3 - 0.2j, mobius(0.3 - 0.2j, z)), z)
    with pytest.raises(DomainError, match="must lie in the disk"):
        mobius(1.0, 0.0)


def test_pointwise_projection_bound():
    assert pointwise_projection_bound(0.0) == 1.0
    assert pointwise_projection_bound(0.5) == pytest.approx(np.log(4.0 / 3.0) / 0.25)


@given(st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=6),
       st.floats(min_value=0.05, max_value=0.95))
@settings(max_examples=30, deadline=None)
def test_dilate_symmetry(coeffs, r):
    f = PowerSeries(coeffs)
    g = PowerSeries(coeffs[::-1])
    assert dilate_symmetry_check(f, g, r, tol=1e-9).passed


def test_circle_disk_identity():
    g = PowerSeries([1.0, 2.0, -1.0j])
    result = circle_disk_identity_check(
        g, lambda z: z ** 2 + np.conj(z), lambda z: 2 * z, 0.6, degree=2,
    )
    assert result.passed
    assert result.lhs == pytest.approx(2.0 * 0.6)


def test_projection_bounds(disk_points):
    mu0 = get_symbol("mu0")
    assert pointwise_bound_check(mu0, disk_points).passed
    result = bloch_image_check(MonomialSymbol(2, 0))
    assert result.passed
    assert result.lhs == pytest.approx(4.0 / (3.0 * np.sqrt(3.0)), rel=1e-6)
    assert result.rhs == PERALA_CONSTANT
