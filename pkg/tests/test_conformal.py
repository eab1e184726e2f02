"""Tests for schlicht maps, elliptic integrals and Goluzin's inequality."""
import math

import numpy as np
import pytest
from scipy import special

from diskbench.conformal import (
    IdentityExteriorMap,
    JoukowskiMap,
    LaurentExteriorMap,
    SchlichtMap,
    becker_map,
    elliptic_EK,
    elliptic_ratio_check,
    g_phi,
    g_phi_derivative,
    goluzin_check,
    h_phi_seminorm,
    identity_map,
    koebe,
    koebe_bieberbach_check,
    nu_phi,
    nu_phi_bound_check,
    pointwise_distortion_check,
    psi_from_phi,
    reconstruction_check,
    rotated_koebe,
    schlicht_corpus,
)
from diskbench.errors import DomainError
from diskbench.models import PowerSeries


def test_koebe_series():
    k = koebe()
    assert np.allclose(k.series(4).coeffs, [0, 1, 2, 3, 4])
    z = np.array([0.3, -0.5j])
    assert np.allclose(k(z), z / (1 - z) ** 2)
    assert np.allclose(k.g_series(6).coeffs, [0, 0, -1, 0, -0.5, 0, -1 / 3])


def test_normalization_is_enforced():
    with pytest.raises(DomainError, match="is not normalized"):
        SchlichtMap("twice", lambda n: PowerSeries([0.0, 2.0]).truncate(max(n, 1)))


def test_g_phi_from_taylor_series():
    plain = SchlichtMap("koebe-series", koebe().series)
    z = np.array([0.0, 0.3, 0.2 - 0.4j])
    assert np.allclose(g_phi(plain, z), np.log(1 - z ** 2), atol=1e-10)
    assert np.allclose(g_phi_derivative(plain, z), -2 * z / (1 - z ** 2), atol=1e-9)


def test_identity_map():
    phi = identity_map()
    assert g_phi(phi, 0.5) == 0
    assert h_phi_seminorm(phi) == 0.0


def test_becker_map():
    rng = np.random.default_rng(0)
    phi = becker_map(rng, degree=8, scale=0.5)
    z = np.array([0.1, 0.4j, -0.6 + 0.2j])
    assert np.allclose(g_phi(phi, z), phi.g_series(200)(z), atol=1e-8)
    with pytest.raises(DomainError, match="0 < scale <= 1"):
        becker_map(rng, scale=1.5)


def test_corpus():
    maps = schlicht_corpus(seed=1)
    assert len(maps) == 7
    assert {"identity", "koebe"} <= {phi.name for phi in maps}


@pytest.mark.parametrize("phi", schlicht_corpus(), ids=lambda phi: phi.name)
def test_distortion_theorems(phi):
    assert koebe_bieberbach_check(phi).passed
    assert pointwise_distortion_check(phi).passed
    assert h_phi_seminorm(phi) <= 6.0


def test_koebe_is_extremal():
    result = koebe_bieberbach_check(koebe())
    assert result.lhs > 3.9
    assert h_phi_seminorm(rotated_koebe(0.7)) > 5.8


def test_elliptic_special_values():
    assert elliptic_EK(0.0) == pytest.approx((math.pi / 2, math.pi / 2))
    E, K = elliptic_EK(1.0)
    assert E == 1.0 and K == math.inf


@pytest.mark.parametrize("s", [0.1, 0.5, 0.9, 0.999])
def test_elliptic_methods_agree(s):
    E, K = elliptic_EK(s)
    assert K == pytest.approx(special.ellipk(s * s), rel=1e-12)
    assert E == pytest.approx(special.ellipe(s * s), rel=1e-12)
    Eq, Kq = elliptic_EK(s, method="quadrature")
    assert (Eq, Kq) == pytest.approx((E, K), rel=1e-10)


def test_elliptic_errors():
    with pytest.raises(DomainError, match="elliptic modulus"):
        elliptic_EK(1.5)
    with pytest.raises(DomainError, match="Unsupported elliptic method: series"):
        elliptic_EK(0.5, method="series")


def test_elliptic_ratio():
    assert elliptic_ratio_check(np.linspace(0.0, 0.99, 100)).passed


def test_exterior_maps():
    zeta = np.array([2.0, 1.5j, -3 + 1j])
    laurent = LaurentExteriorMap([0.0, 1.0])
    joukowski = JoukowskiMap()
    assert np.allclose(laurent(zeta), joukowski(zeta))
    assert np.allclose(laurent.h(zeta), joukowski.h(zeta))
    assert np.allclose(laurent.dh(zeta), joukowski.dh(zeta))
    psi = psi_from_phi(koebe())
    assert np.allclose(psi(zeta), zeta - 2 + 1 / zeta)
    assert np.allclose(psi.dh(zeta), joukowski.dh(zeta))


def test_goluzin_is_sharp_for_joukowski():
    result = goluzin_check(JoukowskiMap(), 2.0)
    assert result.passed
    assert result.lhs == pytest.approx(0.6906144, rel=1e-6)
    assert result.rhs == pytest.approx(0.6906144, rel=1e-6)
    assert result.extra["simple_lhs"] == pytest.approx(2 / 3)


@pytest.mark.parametrize("zeta", [1.01, 1.5j, -2 + 2j, 10.0])
def test_goluzin_holds(zeta):
    for psi in (IdentityExteriorMap(), JoukowskiMap(), psi_from_phi(rotated_koebe(1.0))):
        assert goluzin_check(psi, zeta).passed


def test_goluzin_needs_exterior_point():
    with pytest.raises(DomainError, match="needs \\|zeta\\| > 1"):
        goluzin_check(JoukowskiMap(), 0.5j)


def test_nu_phi_for_koebe():
    field = nu_phi(koebe(), J=32)
    assert field.sup_norm <= 2.0 + 1e-9
    assert nu_phi_bound_check(koebe(), J=64).passed
    result = reconstruction_check(koebe(), J=64)
    assert result.passed, result.detail
