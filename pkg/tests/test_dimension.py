"""Tests for the quasicircle dimension bound."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diskbench.dimension import (
    K_MAX,
    F,
    dF_dt,
    desymmetrize,
    dim_bound,
    dimension_report,
    gap_ratio_check,
    root_check,
    smirnov_bound,
    symmetrization_check,
    symmetrize,
    t_k,
    t_k_numeric,
)
from diskbench.errors import DomainError
from diskbench.verify import SYMMETRIZATION_MAX


def test_validity_interval():
    assert K_MAX == pytest.approx(0.205213, abs=1e-6)
    assert K_MAX * (1 + 7 * K_MAX) == pytest.approx(0.5)
    assert t_k(0.999 * K_MAX) < 2.0


def test_root_value():
    x = 0.01 * 1.7 ** 2
    assert t_k(0.1) == pytest.approx(2.0 / (1.0 + math.sqrt(1.0 - x)))
    assert F(0.1, t_k(0.1)) == pytest.approx(0.0, abs=1e-14)
    assert dF_dt(0.1, t_k(0.1)) < 0


@pytest.mark.parametrize("k", [0.0, -0.1, 0.25, 1.0])
def test_root_outside_interval(k):
    with pytest.raises(DomainError, match="outside the validity interval"):
        t_k(k)
    with pytest.raises(DomainError, match="outside the validity interval"):
        t_k_numeric(k)


@given(st.floats(min_value=1e-4, max_value=0.2))
@settings(max_examples=100, deadline=None)
def test_numeric_root_agrees(k):
    root = t_k(k)
    assert 1.0 < root < 2.0
    assert t_k_numeric(k) == pytest.approx(root, abs=1e-12)


def test_symmetrize():
    assert symmetrize(0.5) == pytest.approx(0.8)
    assert desymmetrize(0.8) == pytest.approx(0.5)
    assert symmetrize(1.0) == 1.0
    with pytest.raises(DomainError, match="k' must lie in"):
        symmetrize(1.5)
    with pytest.raises(DomainError, match="k must lie in"):
        desymmetrize(-0.1)
    assert symmetrization_check(np.linspace(0.0, 1.0, 21)).passed


def test_symmetrization_round_trip_up_to_099():
    check = symmetrization_check(np.linspace(0.0, SYMMETRIZATION_MAX, 991))
    assert check.passed
    assert check.lhs <= 1e-14


def test_dimension_report():
    report = dimension_report(0.05)
    assert report.k == pytest.approx(0.1 / 1.0025)
    assert report.t_k == pytest.approx(dim_bound(0.05))
    assert report.derivative_sign == -1.0
    assert abs(report.F_at_root) < 1e-14
    assert report.asymptotic_gap == pytest.approx(report.t_k - smirnov_bound(0.05))
    assert report.asymptotic_gap > 0


def test_dimension_bound_is_close_to_smirnov():
    for kp in (0.001, 0.01, 0.05):
        assert 1.0 < dim_bound(kp) < 1.0 + kp * kp + 40 * kp ** 3


def test_root_gap_in_k_is_third_order():
    ks = np.linspace(0.001, 0.05, 50)
    ratios = [(t_k(k) - 1.0 - k * k / 4.0) / k ** 3 for k in ks]
    assert min(ratios) > 3.5
    assert max(ratios) <= 8.0


def test_checks():
    assert root_check(np.linspace(0.01, 0.2, 20)).passed
    assert gap_ratio_check([0.01, 0.02, 0.03]).passed
    assert not gap_ratio_check([0.01], limit=1.0).passed
