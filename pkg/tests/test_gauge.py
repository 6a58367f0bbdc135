import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from magscatter import numerics
from magscatter.errors import ContourThroughOrigin, CurlNotZero, DecayTooSlow
from magscatter.fields import FieldSpec, eval_field
from magscatter.gauge import (
    CutoffSpec,
    GaugeFunction,
    ShortRangePotential3D,
    ab_potential_2d,
    apply_gauge,
    asymptotic_coefficient_2d,
    asymptotic_coefficient_from_potential,
    decompose_potential,
    example_potential_3d,
    gauge_scalar_U,
    homogeneous_decomposition,
    modified_ab_potential_3d,
    transversal_potential,
    transversal_potential_2d,
)

GAUSS = FieldSpec.catalog("gaussian2d")
DIPOLE = FieldSpec.catalog("radial_plus_dipole_2d")
BUMP = FieldSpec.catalog("bump_3d")
TORUS = FieldSpec.catalog("toroidal_solenoid_3d")

unit_angle = st.floats(0.0, 2 * math.pi)


def test_gaussian_transversal_oracle():
    # m(r) = int_0^r exp(-t^2) t dt = (1 - exp(-r^2)) / 2 and A = m (-x2, x1) / r^2
    x = np.array([[1.0, 0.0], [0.0, 2.0]])
    A = transversal_potential_2d(GAUSS, x)
    m = 0.5 * (1 - np.exp(-np.array([1.0, 4.0])))
    expected = np.array([[0.0, m[0]], [-m[1] / 2, 0.0]])
    assert np.allclose(A, expected, atol=1e-13)
    assert abs(A[0, 1] - 0.31606027941427883) < 1e-13


def test_dipole_asymptotic_coefficient():
    # a(xhat) = -alpha + <p, xhat> for the radial-plus-dipole family
    th = np.array([0.0, 1.0, 2.5, 4.0])
    xhat = np.stack([np.cos(th), np.sin(th)], axis=-1)
    a = asymptotic_coefficient_2d(DIPOLE, xhat)
    assert np.allclose(a, -0.25 + 0.1 * np.cos(th), atol=1e-12)


def test_coefficient_from_potential():
    a = asymptotic_coefficient_from_potential(ab_potential_2d(0.4), 5.0)
    assert np.allclose(a(np.linspace(0, 6, 7)), -0.4, atol=1e-15)


def test_ab_potential_curl_free():
    A = ab_potential_2d(0.3)
    x = np.array([[1.0, 0.5], [-2.0, 0.3]])
    assert np.allclose(numerics.fd_curl_2d(A, x), 0.0, atol=1e-8)


@pytest.mark.parametrize("spec", [GAUSS, DIPOLE], ids=["gaussian2d", "radial_plus_dipole_2d"])
def test_curl_reconstruction_2d(spec):
    x = np.random.default_rng(5).uniform(-1.5, 1.5, (40, 2))
    c = numerics.fd_curl_2d(transversal_potential(spec), x)
    assert np.max(np.abs(c - eval_field(spec, x))) < 1e-6


def test_curl_reconstruction_bump():
    x = np.random.default_rng(6).uniform(-1.5, 1.5, (40, 3))
    c = numerics.fd_curl_3d(transversal_potential(BUMP), x)
    assert np.max(np.abs(c - eval_field(BUMP, x))) < 1e-6


@settings(max_examples=30, deadline=None)
@given(st.floats(-4, 4), st.floats(-4, 4), st.floats(-4, 4))
def test_transversality_3d(a, b, c):
    x = np.array([a, b, c])
    if np.linalg.norm(x) < 1e-6:
        return
    for spec in (BUMP, TORUS):
        A = transversal_potential(spec)(x)
        assert abs(A @ x) < 1e-12 * max(1.0, np.linalg.norm(A) * np.linalg.norm(x))


@settings(max_examples=30, deadline=None)
@given(unit_angle, st.floats(0.2, 5.0), st.floats(0.1, 10.0))
def test_homogeneity_2d(theta, r, lam):
    d = decompose_potential(DIPOLE)
    x = r * np.array([math.cos(theta), math.sin(theta)])
    assert np.allclose(d.a_inf(lam * x), d.a_inf(x) / lam, rtol=1e-10, atol=1e-14)
    assert abs(d.a_inf(x) @ x) < 1e-14


def test_decomposition_regions():
    d = decompose_potential(BUMP)
    far = np.array([[5.0, 1.0, -2.0]])
    # outside the support the transversal potential is purely homogeneous
    assert np.allclose(d.a_reg(far), 0.0, atol=1e-15)
    assert np.allclose(d.full(far), d.a_inf(far), atol=1e-15)
    assert d.gauge_tag == "transversal" and d.rho > 1


def test_decay_guard():
    slow = FieldSpec.catalog("gaussian2d", decay_exponent=2.0)
    with pytest.raises(DecayTooSlow):
        decompose_potential(slow)


def test_example_potential_3d():
    with pytest.raises(ValueError):
        example_potential_3d(1.0, 1.0, 1.0)
    A = example_potential_3d(1.0, -0.4, -0.6)
    x = np.random.default_rng(1).normal(size=(20, 3))
    assert np.max(np.abs(np.sum(A(x) * x, axis=-1))) < 1e-14
    assert np.allclose(A(3 * x), A(x) / 3, atol=1e-15)


def test_modified_ab_field_is_long_range():
    # the lifted point flux carries a field homogeneous of degree -2
    A = modified_ab_potential_3d(0.5)
    x = np.array([[1.0, 0.5, 0.3], [-0.4, 1.1, -2.0]])
    c = numerics.fd_curl_3d(A, x)
    assert np.min(np.linalg.norm(c, axis=1)) > 1e-2
    assert np.allclose(numerics.fd_curl_3d(A, 3 * x), c / 9, atol=1e-8)


def test_U_normalization_and_gradient():
    d = decompose_potential(BUMP)
    assert gauge_scalar_U(d, (0.0, 0.0, -1.0)) == 0.0
    x = np.array([[2.0, 1.5, 1.0], [-1.0, 2.5, 0.5]])
    g = numerics.fd_grad(lambda y: gauge_scalar_U(d, y), x, h=1e-4)
    assert np.allclose(g, d.a_inf(x), atol=1e-7)


def test_U_homogeneous_of_degree_zero():
    d = decompose_potential(TORUS)
    x = np.array([0.3, -0.2, 0.5])
    assert abs(gauge_scalar_U(d, x) - gauge_scalar_U(d, 4 * x)) < 1e-10


def test_U_errors():
    d = decompose_potential(BUMP)
    with pytest.raises(ContourThroughOrigin):
        gauge_scalar_U(d, (0.0, 0.0, 0.0))
    with pytest.raises(ContourThroughOrigin):
        gauge_scalar_U(d, (1.0, 0.0, 0.0), basepoint=(0.0, 0.0, 0.0))
    long_range = homogeneous_decomposition(modified_ab_potential_3d(0.5))
    with pytest.raises(CurlNotZero):
        gauge_scalar_U(long_range, (1.0, 0.3, 0.5))


def test_cutoff_profile():
    c = CutoffSpec(1.0, 2.0)
    r = np.linspace(0, 3, 31)
    eta = c.eta(r)
    assert eta[0] == 0.0 and eta[-1] == 1.0 and np.all(np.diff(eta) >= 0)
    assert np.allclose(c.deta(r), np.gradient(eta, r), atol=5e-2)
    with pytest.raises(ValueError):
        CutoffSpec(2.0, 1.0)
    assert CutoffSpec.default_for(TORUS).R2 < 1.0


def test_short_range_matches_transversal_inside_R1():
    sr = ShortRangePotential3D(BUMP)
    x = np.random.default_rng(2).normal(size=(10, 3))
    x *= (0.9 * sr.cutoff.R1 / np.linalg.norm(x, axis=1))[:, None]
    assert np.allclose(sr(x), transversal_potential(BUMP)(x), atol=1e-14)


def test_short_range_curl_in_ramp():
    sr = ShortRangePotential3D(BUMP)
    x = np.random.default_rng(4).normal(size=(6, 3))
    x *= (0.5 * (sr.cutoff.R1 + sr.cutoff.R2) / np.linalg.norm(x, axis=1))[:, None]
    c = numerics.fd_curl_3d(sr, x)
    assert np.max(np.abs(c - eval_field(BUMP, x))) < 1e-6


def test_apply_gauge_keeps_curl():
    A = transversal_potential(GAUSS)
    g = GaugeFunction(lambda x: np.sin(x[..., 0]) * x[..., 1])
    B = apply_gauge(A, g)
    x = np.array([[0.3, 0.2], [-0.5, 1.0]])
    assert np.allclose(numerics.fd_curl_2d(B, x, h=1e-3), numerics.fd_curl_2d(A, x, h=1e-3), atol=1e-6)
