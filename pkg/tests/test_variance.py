"""Tests for tail integrals, asymptotic variance and the exponential type spectrum."""
import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diskbench.errors import DomainError
from diskbench.extremal import mu0_function
from diskbench.models import PowerSeries, RadiiLadder, log_normalizer
from diskbench.variance import (
    atvar_estimate,
    avar_estimate,
    betterest_bound_check,
    betterest_exponent,
    circle_l2_squared,
    exp_type_spectrum,
    exponential_integral,
    gaussian_tail_expectation,
    log_pole_function,
    main_bound,
    main_theorem_check,
    makarov_check,
    marshall_bound_check,
    moment_bound_check,
    normalized_dilate,
    spectrum_envelope,
    subadditivity_check,
    tail_integral,
    tail_integral_sweep,
    tail_slope,
    uniform_avar_estimate,
)


@pytest.fixture
def short_ladder():
    return RadiiLadder.dyadic(4, 12)


def test_main_bound():
    assert main_bound(0.0) == 10.0
    assert main_bound(0.75) == pytest.approx(80.0)
    with pytest.raises(DomainError, match="0 <= a < 1"):
        main_bound(1.0)


def test_tail_integral_closed_forms():
    assert tail_integral(PowerSeries([0.0]), 0.5, 0.9) == pytest.approx(1.0)
    # |z| = r on the circle, so the integrand is constant
    r, a = 0.9, 0.7
    expected = math.exp(a * r ** 4 * r * r / log_normalizer(r))
    assert tail_integral(PowerSeries([0.0, 1.0]), a, r) == pytest.approx(expected)


def test_tail_integral_domain():
    with pytest.raises(DomainError, match="a >= 0"):
        tail_integral(PowerSeries([0.0, 1.0]), -0.1, 0.5)
    with pytest.raises(DomainError, match="radius must lie in"):
        tail_integral(PowerSeries([0.0, 1.0]), 0.1, 1.0)


def test_tail_integral_overflow_is_flagged(caplog):
    with caplog.at_level(logging.WARNING, logger="diskbench.variance"):
        value = tail_integral(PowerSeries([100.0]), 0.5, 0.5)
    assert value == float("inf")
    assert "divergent sample" in caplog.text
    table = tail_integral_sweep(PowerSeries([100.0]), [0.0, 0.5], RadiiLadder([0.5]))
    assert [row.flagged for row in table.rows] == [False, True]


def test_sweep_order(short_ladder):
    table = tail_integral_sweep(PowerSeries([0.0, 1.0]), [0.1, 0.9], short_ladder)
    assert len(table.rows) == 2 * len(short_ladder)
    assert [row.parameter for row in table.rows[: len(short_ladder)]] == [0.1] * len(short_ladder)
    assert [row.radius for row in table.rows[: len(short_ladder)]] == list(short_ladder.radii)
    assert table.rows[-1].value == pytest.approx(tail_integral(PowerSeries([0.0, 1.0]), 0.9, short_ladder.radii[-1]))


def test_log_pole_exponential_integral():
    """int |1 - r zeta|^-2 ds = 1/(1 - r^2)."""
    value, overflow = exponential_integral(log_pole_function(), 2.0, 0.9)
    assert not overflow
    assert value == pytest.approx(1.0 / (1.0 - 0.81), rel=1e-9)


def test_circle_l2_squared():
    r = 0.5
    j = np.arange(1, 200)
    assert circle_l2_squared(log_pole_function(), r) == pytest.approx(np.sum(r ** (2 * j) / j ** 2))
    assert circle_l2_squared(PowerSeries([1.0, 1.0]), r) == pytest.approx(1.25)


def test_variance_estimates(short_ladder):
    radii = short_ladder.tail(5)
    expected = np.max(radii ** 2 / log_normalizer(radii))
    assert avar_estimate(PowerSeries([0.0, 1.0]), short_ladder) == pytest.approx(expected)
    assert uniform_avar_estimate([PowerSeries([0.0, 1.0]), PowerSeries([0.0, 0.5])], short_ladder) \
        == pytest.approx(expected)
    samples = normalized_dilate(PowerSeries([0.0, 1.0]), 0.5, 8)
    assert samples.radius == 1.0
    assert np.allclose(np.abs(samples.values), 0.5 / math.sqrt(log_normalizer(0.5)))


def test_atvar_estimate(short_ladder):
    assert atvar_estimate(PowerSeries([0.0, 1.0]), short_ladder, [2.0, 0.5, 1.0]) == 0.5
    # a huge constant overflows every small tau
    assert atvar_estimate(PowerSeries([1000.0]), short_ladder, [0.5, 1.0]) == float("inf")
    assert atvar_estimate(PowerSeries([1000.0]), short_ladder, [0.5, 1e6]) == 1e6
    with pytest.raises(DomainError, match="tau grid"):
        atvar_estimate(PowerSeries([0.0, 1.0]), short_ladder, [])


def test_tail_slope():
    L = np.linspace(1.0, 10.0, 6)
    slope, rms = tail_slope(L, 3.0 * np.exp(0.7 * L))
    assert slope == pytest.approx(0.7)
    assert rms < 1e-12


def test_gaussian_tail_expectation():
    assert gaussian_tail_expectation(2.0) == 2.0
    assert gaussian_tail_expectation(1.0) == float("inf")


def test_makarov_bounds():
    results = makarov_check(PowerSeries([0.0, 1.0]), 0.9)
    assert len(results) == 4
    assert all(result.passed for result in results)


@given(st.floats(min_value=0.2, max_value=3.0),
       st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
       st.floats(min_value=0.1, max_value=0.99))
@settings(max_examples=40, deadline=None)
def test_marshall_bound(sigma, t, r):
    assert marshall_bound_check(PowerSeries([0.0, 1.0, 0.5j]), sigma, t, r).passed


def test_marshall_bound_domain():
    with pytest.raises(DomainError, match="sigma must be positive"):
        marshall_bound_check(PowerSeries([0.0, 1.0]), 0.0, 1.0, 0.5)


def test_betterest_exponent():
    assert betterest_exponent(1.0, 1.0) == pytest.approx(-0.25)
    assert betterest_exponent(0.5, 2.0) == pytest.approx(-1.5)
    with pytest.raises(DomainError, match="a must be positive"):
        betterest_exponent(0.0, 1.0)


def test_betterest_bound_for_extremal_projection():
    for a, t in ((0.5, 0.5), (0.5, 2.0), (0.9, 1.0j)):
        assert betterest_bound_check(mu0_function(), a, t, 0.99).passed


def test_spectrum_envelope():
    assert spectrum_envelope(1.0) == 0.25
    assert spectrum_envelope(2.0) == 1.0
    assert spectrum_envelope(3.0j) == 2.0


def test_exp_type_spectrum_of_log_pole():
    """|e^(2 log(1/(1-z)))| integrates to exactly e^L."""
    estimate = exp_type_spectrum(log_pole_function(), 2.0, RadiiLadder.dyadic(4, 17))
    assert estimate.beta_hat == pytest.approx(1.0, abs=1e-5)
    assert estimate.n_used == 5
    assert estimate.n_dropped == 0


def test_exp_type_spectrum_needs_long_ladder(short_ladder):
    with pytest.raises(DomainError, match="ladder must reach"):
        exp_type_spectrum(log_pole_function(), 2.0, short_ladder)


def test_moment_bounds():
    g = mu0_function()
    for q in (1.0, 2.0, 4.0):
        assert moment_bound_check(g, q, 0.9).passed


@given(st.lists(st.complex_numbers(max_magnitude=100, allow_nan=False, allow_infinity=False),
                min_size=2, max_size=20),
       st.floats(min_value=1e-3, max_value=1e3))
@settings(max_examples=50, deadline=None)
def test_subadditivity(values, alpha):
    g = np.array(values)
    assert subadditivity_check(g, g[::-1], alpha).passed


def test_main_theorem_for_extremal_projection(short_ladder):
    result = main_theorem_check(mu0_function(), [0.1, 0.5, 0.9], short_ladder)
    assert result.passed
    assert "P[mu0]" in result.detail
