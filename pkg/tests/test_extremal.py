"""Tests for the extremal symbol and its projection."""
import math

import numpy as np
import pytest

from diskbench.errors import DomainError
from diskbench.extremal import (
    ExtremalSymbol,
    exponential_identity_check,
    ladder_growth,
    lower_bound,
    lower_bound_check,
    mu0_exponent,
    mu0_function,
    mu0_projection,
    mu0_projection_derivative,
    near_maximal_growth_check,
)
from diskbench.models import RadiiLadder


def test_extremal_symbol_is_unimodular():
    mu = ExtremalSymbol()
    w = np.array([0.5j, -0.3 + 0.2j, 0.9])
    assert np.allclose(np.abs(mu(w)), 1.0)
    assert mu.sup_norm() == 1.0
    assert np.allclose(mu.exact_antiholomorphic_moments(3), [1 / 2, 1 / 6, 1 / 12, 1 / 20])
    assert np.allclose(mu.exact_holomorphic_moments(3), [0.5, -0.5, 0, 0])


def test_projection_closed_form():
    assert mu0_projection(0.0) == pytest.approx(0.5)
    assert mu0_projection(0.5) == pytest.approx(4 * math.log(2.0) - 2.0)
    z = np.array([0.04, 0.06j, 0.3 - 0.4j])
    series = sum(z ** j / (j + 2) for j in range(200))
    assert np.allclose(mu0_projection(z), series, rtol=1e-9)


def test_projection_derivative():
    assert mu0_projection_derivative(0.0) == pytest.approx(1 / 3)
    z, h = 0.3 + 0.2j, 1e-6
    numeric = (mu0_projection(z + h) - mu0_projection(z - h)) / (2 * h)
    assert mu0_projection_derivative(z) == pytest.approx(numeric, rel=1e-7)


def test_projection_outside_disk():
    with pytest.raises(DomainError, match="open disk"):
        mu0_projection(1.0)
    with pytest.raises(DomainError, match="open disk"):
        mu0_projection_derivative([0.5, 1.2j])


def test_function_wrapper():
    g = mu0_function()
    z = np.array([0.1, 0.5j, -0.7])
    assert np.allclose(g(z), mu0_projection(z))
    exponent = mu0_exponent()
    assert np.allclose(exponent(z), z ** 2 * mu0_projection(z))


def test_exponential_identity():
    rng = np.random.default_rng(3)
    z = 0.9 * np.sqrt(rng.random(200)) * np.exp(2j * np.pi * rng.random(200))
    assert exponential_identity_check(z).passed


def test_near_maximal_growth():
    assert near_maximal_growth_check(np.linspace(0.01, 0.99, 99)).passed
    with pytest.raises(DomainError, match="x in \\(0, 1\\)"):
        near_maximal_growth_check([0.5, 1.0])


def test_lower_bound():
    assert lower_bound(2.0, 0.99) == pytest.approx(math.exp(-2) / math.sqrt(1 - 0.99 ** 2))
    assert lower_bound(1.0, 0.5) == pytest.approx(math.exp(-2))
    with pytest.raises(DomainError, match="a must be positive"):
        lower_bound(0.0, 0.5)
    with pytest.raises(DomainError, match="radius must lie in"):
        lower_bound(2.0, 1.0)


@pytest.mark.parametrize("a", [0.5, 2.0])
def test_lower_bound_check(a):
    assert lower_bound_check(a, 0.9).passed


def test_ladder_growth_beyond_one():
    result = ladder_growth(2.0, RadiiLadder.dyadic(4, 12))
    assert result.passed
    assert len(result.extra["values"]) == 6
    assert result.rhs > result.lhs
