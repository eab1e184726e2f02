"""Tests for the shared data models."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diskbench.errors import DomainError, NonFiniteInputError
from diskbench.models import (
    LADDER_CAP,
    CheckResult,
    CircleSamples,
    MotionSeries,
    PolarGrid,
    PowerSeries,
    RadiiLadder,
    SweepTable,
    log_normalizer,
)

coefficient = st.floats(min_value=-10, max_value=10, allow_nan=False)


def test_power_series_algebra():
    """Evaluation, derivative and products of truncated series."""
    f = PowerSeries([1.0, 2.0, 3.0])
    assert f.degree == 2
    assert f(2.0) == pytest.approx(17.0)
    assert np.allclose(f.derivative().coeffs, [2.0, 6.0])
    assert np.allclose(f.antiderivative(5.0).coeffs, [5.0, 1.0, 1.0, 1.0])
    assert np.allclose((f * PowerSeries([0.0, 1.0])).coeffs, [0.0, 1.0, 2.0, 3.0])
    assert np.allclose((f - 1).coeffs, [0.0, 2.0, 3.0])
    assert np.allclose(f.shift(-1).coeffs, [2.0, 3.0])
    assert np.allclose(PowerSeries.monomial(3, 2.0).coeffs, [0, 0, 0, 2.0])


def test_power_series_transcendental():
    """Reciprocal, log and exp match their known Taylor coefficients."""
    one_minus_z = PowerSeries([1.0, -1.0])
    assert np.allclose(one_minus_z.reciprocal(6).coeffs, np.ones(7))
    log = one_minus_z.log(6).coeffs
    assert log[0] == 0
    assert np.allclose(log[1:], [-1.0 / k for k in range(1, 7)])
    exp = PowerSeries([0.0, 1.0]).exp(6).coeffs
    assert np.allclose(exp, [1.0 / math.factorial(k) for k in range(7)])


def test_power_series_zero_constant_term():
    with pytest.raises(DomainError, match="zero constant term"):
        PowerSeries([0.0, 1.0]).reciprocal()
    with pytest.raises(DomainError, match="no logarithm"):
        PowerSeries([0.0, 1.0]).log()


def test_power_series_rejects_non_finite():
    with pytest.raises(NonFiniteInputError, match="non-finite"):
        PowerSeries([1.0, float("nan")])


@given(st.lists(coefficient, min_size=1, max_size=40), st.floats(min_value=0.1, max_value=0.99))
@settings(max_examples=50, deadline=None)
def test_on_circle_matches_direct_evaluation(coeffs, r):
    """FFT sampling folds coefficients above n into their aliased bins."""
    f = PowerSeries(coeffs)
    n = 16
    points = r * np.exp(2j * np.pi * np.arange(n) / n)
    assert np.allclose(f.on_circle(r, n), f(points), atol=1e-9 * (1 + np.sum(np.abs(coeffs))))


def test_l2_circle_norm_is_parseval():
    f = PowerSeries([1.0, 2.0j, -0.5])
    values = f.on_circle(0.7, 64)
    assert f.l2_circle_norm_sq(0.7) == pytest.approx(np.mean(np.abs(values) ** 2))


def test_circle_samples_validation():
    samples = CircleSamples(0.5, np.ones(8))
    assert samples.n == 8
    assert np.allclose(np.abs(samples.points), 0.5)
    with pytest.raises(DomainError, match="power of two"):
        CircleSamples(0.5, np.ones(6))
    with pytest.raises(NonFiniteInputError):
        CircleSamples(0.5, [1.0, np.inf, 0.0, 0.0])


def test_polar_grid_from_radii_has_unit_mass():
    grid = PolarGrid.from_radii(np.linspace(0.05, 0.95, 10), 16)
    assert grid.weights.sum() == pytest.approx(1.0)
    assert grid.shape == (10, 16)
    with pytest.raises(DomainError, match="strictly increasing"):
        PolarGrid(np.array([0.5, 0.2]), np.array([0.5, 0.5]), 8)
    with pytest.raises(DomainError, match="angular count"):
        PolarGrid(np.array([0.5]), np.array([1.0]), 6)


def test_dyadic_ladder():
    ladder = RadiiLadder.dyadic()
    assert len(ladder) == 17
    assert ladder.radii[0] == pytest.approx(1 - 2 ** -4)
    # 1 - 2**-20 lies above the cap
    assert ladder.radii[-1] == LADDER_CAP
    assert np.allclose(ladder.L, log_normalizer(ladder.radii))
    assert np.allclose(ladder.tail(2), ladder.radii[-2:])
    with pytest.raises(DomainError, match="invalid ladder range"):
        RadiiLadder.dyadic(5, 4)
    with pytest.raises(DomainError, match="in \\(0, 1\\)"):
        RadiiLadder([0.5, 1.0])


def test_log_normalizer():
    assert log_normalizer(0.0) == 0.0
    assert log_normalizer(0.5) == pytest.approx(math.log(4.0 / 3.0))


def test_sweep_table_records():
    table = SweepTable()
    table.add(0.5, 0.9, 1.25)
    table.add(0.5, 0.99, 2.5, flagged=True)
    table.add(0.7, 0.9, 3.0)
    assert np.allclose(table.values_for(0.5), [1.25, 2.5])
    assert len(table.flagged_rows) == 1
    assert table.to_records()[1] == {"a": 0.5, "r": 0.99, "value": 2.5, "flagged": True}


def test_motion_series_evaluate():
    h1 = CircleSamples(1.0, np.full(4, 2.0))
    h2 = CircleSamples(1.0, np.full(4, -1.0))
    motion = MotionSeries(1.5, [h1, h2])
    assert motion.J == 2
    assert motion.coefficient(2) is h2
    assert np.allclose(motion.evaluate(0.5), 2.0 * 0.5 - 0.25)
    with pytest.raises(DomainError, match="R > 1"):
        MotionSeries(1.0, [h1])


def test_check_result_record():
    result = CheckResult("bound", "ref", 1.0, 3.0, True, "ok", extra={"x": 1})
    assert result.margin == 2.0
    assert result.to_record() == {
        "name": "bound", "reference": "ref", "lhs": 1.0, "rhs": 3.0, "passed": True, "detail": "ok",
    }
