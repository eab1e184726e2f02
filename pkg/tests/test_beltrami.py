"""Tests for holomorphic motions of the unit disk.

The characteristic function of the disk generates the motion
Psi(lambda, zeta) = zeta + lambda/zeta, for which every Neumann term past
the first vanishes and H_j(zeta) = -zeta^(-2j)/j.
"""
import numpy as np
import pytest

from diskbench.beltrami import (
    G_lambda,
    G_lambda_derivative,
    MotionMap,
    NeumannSeries,
    beurling_form_check,
    bk_bound,
    bk_splice_check,
    closed_form_coefficients,
    exterior_type_spectrum,
    goluzin_derived_bounds_check,
    motion_coefficients,
    neumann_derivative,
    plancherel_average_check,
    prause_smirnov_bound,
    prause_smirnov_threshold,
)
from diskbench.conformal import goluzin_check
from diskbench.errors import DomainError
from diskbench.models import RadiiLadder
from diskbench.symbols import get_symbol


@pytest.fixture(scope="module")
def disk_series():
    return NeumannSeries(get_symbol("one"), terms=3, n_r=32, n_a=64)


def _circle(R, n):
    return R * np.exp(2j * np.pi * np.arange(n) / n)


def test_neumann_terms(disk_series):
    assert len(disk_series) == 3
    first = disk_series.exterior[0].coeffs
    assert first[2] == pytest.approx(-1.0)
    assert np.allclose(first[3:], 0.0)
    assert disk_series.norms[0] == pytest.approx(1.0, rel=1e-6)
    assert disk_series.norms[1] < 1e-8
    assert np.allclose(disk_series.values(0.5)[1:], 0.0, atol=1e-8)


def test_neumann_derivative(disk_series):
    zeta = np.array([2.0, 1.5j, -1.2 + 0.4j])
    assert np.allclose(neumann_derivative(disk_series, 0.5, zeta, J=2), 1.0 - 0.5 / zeta ** 2, atol=1e-8)
    with pytest.raises(DomainError, match="motion parameter"):
        neumann_derivative(disk_series, 1.0, 2.0)
    with pytest.raises(DomainError, match="interior evaluation not supported"):
        neumann_derivative(disk_series, 0.5, 0.5)
    with pytest.raises(DomainError, match="at least one term"):
        neumann_derivative(disk_series, 0.5, 2.0, J=0)


def test_coefficient_must_be_bounded_by_one():
    with pytest.raises(DomainError, match=r"\|mu\| <= 1"):
        NeumannSeries(get_symbol("const:2"), terms=1, n_r=8, n_a=16)


def test_motion_coefficients(disk_series):
    R, J = 1.5, 3
    motion = motion_coefficients(disk_series, R, J)
    assert motion.J == J
    zeta = _circle(R, motion.coefficient(1).n)
    for j in range(1, J + 1):
        assert np.allclose(motion.coefficient(j).values, -zeta ** (-2 * j) / j, atol=1e-7)
    assert motion.tail_magnitude == pytest.approx(R ** -8 / 4, rel=1e-4)
    assert np.allclose(motion.evaluate(0.5), sum(-(0.5 / zeta ** 2) ** j / j for j in range(1, J + 1)), atol=1e-7)
    with pytest.raises(DomainError, match="R > 1"):
        motion_coefficients(disk_series, 1.0, J)


def test_closed_form_coefficients(disk_series):
    H1, H2 = closed_form_coefficients(disk_series, 1.5, 64)
    zeta = _circle(1.5, 64)
    assert np.allclose(H1.values, -zeta ** -2, atol=1e-8)
    assert np.allclose(H2.values, -0.5 * zeta ** -4, atol=1e-8)


def test_G_lambda(disk_series):
    z = np.array([0.3, 0.5j, -0.2 + 0.6j])
    assert np.allclose(G_lambda(disk_series, 0, z), -z ** 2, atol=1e-8)
    assert np.allclose(G_lambda(disk_series, 0.5, z, J=2), np.log(1 - 0.5 * z ** 2) / 0.5, atol=1e-8)
    assert np.allclose(G_lambda_derivative(disk_series, 0, z), -2 * z, atol=1e-8)
    assert np.allclose(G_lambda_derivative(disk_series, 0.5j, z, J=2), -2 * z / (1 - 0.5j * z ** 2), atol=1e-8)
    with pytest.raises(DomainError, match=r"\|z\| < 1"):
        G_lambda(disk_series, 0.5, 1.0)


def test_goluzin_derived_bounds(disk_series):
    for lam in (0.3, 0.9j, -0.6 + 0.2j):
        assert goluzin_derived_bounds_check(disk_series, lam, J=2).passed


def test_motion_map(disk_series):
    psi = MotionMap(disk_series, 0.5, J=2)
    zeta = np.array([2.0, 1.2j])
    assert np.allclose(psi(zeta), zeta + 0.5 / zeta, atol=1e-8)
    assert np.allclose(psi.h(zeta), np.log(1 - 0.5 / zeta ** 2), atol=1e-8)
    assert goluzin_check(psi, 2.0).passed
    assert goluzin_check(psi, 1.2 + 0.3j).passed
    for zeta in (1.01, 1.01j, 1.01 * np.exp(0.25j * np.pi)):
        assert goluzin_check(psi, zeta).passed
    with pytest.raises(DomainError, match="motion parameter"):
        MotionMap(disk_series, 1.5)


def test_bk_bound():
    quadratic = bk_bound(0.1, 1.0)
    assert quadratic.branch == "quadratic"
    assert quadratic.bound == pytest.approx(0.25 * 0.01 * 1.7 ** 2)
    linear = bk_bound(0.1, 10j)
    assert linear.branch == "linear"
    assert linear.bound == pytest.approx(1.0 - 1.0 / 1.7 ** 2)
    assert prause_smirnov_bound(0.1, 2.0) == pytest.approx(0.01)
    with pytest.raises(DomainError, match="k must lie in"):
        bk_bound(1.0, 1.0)


@pytest.mark.parametrize("k", [0.01, 0.1, 0.5, 0.9])
def test_bk_splice(k):
    assert bk_splice_check(k).passed


def test_prause_smirnov_threshold():
    assert prause_smirnov_threshold(0.0) == 1.0
    assert prause_smirnov_threshold(0.6) == pytest.approx(2 / 1.8)
    with pytest.raises(DomainError, match="k must lie in"):
        prause_smirnov_threshold(1.0)


def test_plancherel_average(disk_series):
    motion = motion_coefficients(disk_series, 1.1, 4)
    exact = plancherel_average_check(motion, 0.5)
    assert exact.passed
    assert exact.extra["allowance"] == 0.0
    assert plancherel_average_check(motion, 0.5, rho=0.5).passed
    with pytest.raises(DomainError, match="a must lie in"):
        plancherel_average_check(motion, 1.0)
    with pytest.raises(DomainError, match="sample radius"):
        plancherel_average_check(motion, 0.5, rho=0.0)


def test_beurling_form(disk_series):
    for R in (1.01, 1.5, 4.0):
        assert beurling_form_check(disk_series, 0.5, R).passed
    with pytest.raises(DomainError, match="R > 1"):
        beurling_form_check(disk_series, 0.5, 0.9)


def test_exterior_type_spectrum(disk_series):
    estimate, bound = exterior_type_spectrum(disk_series, 0.5, 1.0, RadiiLadder.dyadic(2, 8), J=2)
    assert estimate.n_used >= 2
    assert estimate.n_dropped == 0
    assert abs(estimate.beta_hat) < 0.1
    assert bound.branch == "linear"
    assert bound.bound == pytest.approx(0.5 - 1 / 4.5 ** 2)
