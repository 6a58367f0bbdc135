import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import j0, jv

from magscatter.amplitude import (
    SpectralSet,
    ab_eigenvalue,
    ab_kernel_closed_form,
    ab_partial_wave_sum,
    circle_frame_3d,
    cross_section,
    essential_spectrum_2d,
    essential_spectrum_3d,
    forward_cross_section_coefficient,
    gauge_covariance_transform,
    p_average_3d,
    pure_gauge_sm,
    q_kernel_3d,
    singular_amplitude_2d,
    singular_amplitude_2d_from_a,
    singular_amplitude_3d,
)
from magscatter.errors import DecayTooSlow, DiagonalEvaluation, NotOrthogonal
from magscatter.fields import FieldSpec
from magscatter.gauge import decompose_potential, example_potential_3d, modified_ab_potential_3d

TWO_PI = 2 * math.pi


def _unit(theta):
    return np.array([math.cos(theta), math.sin(theta)])


# ----------------------------------------------------------------------------
# point flux


@pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5, 1.0, 1.5])
def test_ab_eigenvalues(alpha):
    for m in range(-10, 11):
        expected = complex(np.exp(1j * math.pi * alpha)) if m < -alpha else complex(np.exp(-1j * math.pi * alpha))
        assert ab_eigenvalue(m, alpha) == expected
        assert abs(abs(ab_eigenvalue(m, alpha)) - 1) < 1e-15


def test_ab_closed_form_coefficients():
    for alpha in (0.25, 0.5, 1.3):
        delta, off = ab_kernel_closed_form(1.0, 0.0, alpha)
        assert delta == pytest.approx(math.cos(math.pi * alpha), abs=1e-15)
        fl = math.floor(alpha)
        expected = 1j / math.pi * np.exp(-1j * fl) * math.sin(math.pi * alpha) / (np.exp(1j) - 1)
        assert abs(off - expected) < 1e-15


def test_partial_waves_converge_when_truncation_is_negligible():
    # with rho^M ~ 2e-9 only the O(1 - rho) Abel smoothing remains
    d = np.linspace(0.5, TWO_PI - 0.5, 40)
    for alpha in (0.25, 0.5, 0.75):
        err = np.abs(ab_partial_wave_sum(d, 0.0, alpha, M=40000, abel_radius=0.9995)
                     - ab_kernel_closed_form(d, 0.0, alpha)[1]).max()
        assert err < 1e-3


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 3.0))
def test_unitarity_trace(alpha):
    amp = singular_amplitude_2d(FieldSpec.catalog("ab_point_flux_2d", alpha=alpha))
    assert abs(amp.delta_coeff ** 2 + (math.pi * amp.pv_coeff) ** 2 - 1) < 1e-14
    assert abs(amp.delta_coeff - math.cos(math.pi * alpha)) < 1e-12


def test_singular_kernel_matches_ab_kernel_near_diagonal():
    # kernel(omega, omega') is indexed like the closed form in (theta, theta')
    alpha = 0.3
    amp = singular_amplitude_2d(FieldSpec.catalog("ab_point_flux_2d", alpha=alpha))
    for small in (1e-3, -1e-3, 1e-4):
        k = amp.kernel(_unit(0.0), _unit(small))
        ref = ab_kernel_closed_form(0.0, small, alpha)[1]
        assert abs(k - ref) / abs(ref) < 1e-3
    with pytest.raises(DiagonalEvaluation):
        amp.kernel(_unit(1.0), _unit(1.0))


def test_slow_decay_rejected():
    with pytest.raises(DecayTooSlow):
        singular_amplitude_2d(FieldSpec.catalog("gaussian2d", decay_exponent=2.0))


# ----------------------------------------------------------------------------
# spectral sets


def test_spectral_set_basics():
    s = SpectralSet.from_intervals([(-0.5, 0.5)])
    assert s.arcs == ((TWO_PI - 0.5, 0.5),)
    assert s.contains(0.0) and s.contains(6.0) and not s.contains(1.0)
    assert SpectralSet.from_intervals([(0.0, 7.0)]).full_circle
    merged = SpectralSet.from_intervals([(0.0, 1.0), (0.9, 2.0)])
    assert len(merged.arcs) == 1 and merged.arcs[0] == pytest.approx((0.0, 2.0))
    assert s.to_json() == {"arcs": [[TWO_PI - 0.5, 0.5]]}
    assert SpectralSet((), True).to_json() == {"full_circle": True}


@settings(max_examples=40, deadline=None)
@given(st.floats(-10, 10), st.floats(0, 6))
def test_spectral_set_conjugation_involution(lo, width):
    s = SpectralSet.from_intervals([(lo, lo + width)])
    back = s.conjugate().conjugate()
    assert back.full_circle == s.full_circle
    assert np.allclose(np.array(back.arcs).ravel(), np.array(s.arcs).ravel(), atol=1e-9)


def test_dipole_spectrum_endpoints():
    spec = FieldSpec.catalog("radial_plus_dipole_2d", alpha=0.25, p=(0.06, -0.08))
    sp = essential_spectrum_2d(spec, 64)
    assert abs(sp.bounds[0] - (-0.25 * math.pi - 0.2)) < 1e-6
    assert abs(sp.bounds[1] - (-0.25 * math.pi + 0.2)) < 1e-6
    assert sp.contains(-0.25 * math.pi) and sp.contains(0.25 * math.pi) and not sp.contains(math.pi)


def test_dipole_spectrum_full_circle():
    spec = FieldSpec.catalog("radial_plus_dipole_2d", alpha=0.25, p=(0.5 * math.pi, 0.0))
    assert essential_spectrum_2d(spec, 64).full_circle


def test_even_field_spectrum_is_two_points():
    spec = FieldSpec.catalog("gaussian2d")
    sp = essential_spectrum_2d(spec, 32)
    half = 0.5 * math.pi
    assert sp.bounds == pytest.approx((half, half), abs=1e-9)
    assert sp.contains(half) and sp.contains(-half) and not sp.contains(0.0)


# ----------------------------------------------------------------------------
# three dimensions


def _reference_circle(w, theta):
    """Point of the great circle orthogonal to ``w`` in the explicit parametrization."""
    s = math.hypot(w[0], w[1])
    return np.array([
        -(w[1] * math.cos(theta) + w[0] * w[2] * math.sin(theta)) / s,
        (w[0] * math.cos(theta) - w[1] * w[2] * math.sin(theta)) / s,
        s * math.sin(theta),
    ])


def _q_oracle_modified_ab(alpha, w, tau_angle, tau_norm, nmax=60):
    # I(x(theta), w) = c cos(theta); exp(ic cos) = sum i^n J_n(c) e^{in theta}
    # and int e^{in theta} (cos(theta - t) - i0)^-2 = e^{int} (-2 pi |n| (-i)^|n|)
    c = math.pi * alpha * math.sqrt(1 - w[2] ** 2)
    total = 0.0
    for n in range(-nmax, nmax + 1):
        if n == 0:
            continue
        cn = (1j) ** n * jv(n, c)
        total += cn * np.exp(1j * n * tau_angle) * (-TWO_PI * abs(n) * (-1j) ** abs(n))
    return -total / TWO_PI ** 2 / tau_norm ** 2


@pytest.mark.parametrize("w3", [0.0, 0.4, -0.7])
def test_modified_ab_p_average(w3):
    w = np.array([math.sqrt(1 - w3 * w3) * 0.6, math.sqrt(1 - w3 * w3) * 0.8, w3])
    p = p_average_3d(modified_ab_potential_3d(0.5), w)
    assert abs(p - j0(0.5 * math.pi * math.sqrt(1 - w3 * w3))) < 1e-10


def test_example_p_average():
    a1, a2, a3 = 1.0, -0.4, -0.6
    w = np.array([0.3, -0.5, 0.6])
    w /= np.linalg.norm(w)
    s2 = w[0] ** 2 + w[1] ** 2
    amp = math.sqrt(4 * a3 ** 2 * (w[0] * w[1] * w[2]) ** 2
                    + (a1 * (w[0] ** 2 - w[1] ** 2 * w[2] ** 2) - a2 * (w[1] ** 2 - w[0] ** 2 * w[2] ** 2)) ** 2) / s2
    assert abs(p_average_3d(example_potential_3d(a1, a2, a3), w) - j0(amp)) < 1e-10


@pytest.mark.parametrize("tau_angle", [0.3, 1.7, 4.0])
def test_modified_ab_q_kernel_oracle(tau_angle):
    w = np.array([0.48, 0.64, 0.6])
    tau = 0.7 * _reference_circle(w, tau_angle)
    q = q_kernel_3d(modified_ab_potential_3d(0.5), w, tau)
    ref = _q_oracle_modified_ab(0.5, w, tau_angle, 0.7)
    assert abs(q - ref) < 1e-7 * max(1.0, abs(ref))


def test_q_kernel_homogeneity_and_orthogonality():
    amp = singular_amplitude_3d(modified_ab_potential_3d(0.5))
    w = np.array([0.0, 0.6, 0.8])
    e1, e2 = circle_frame_3d(w)
    tau = 0.6 * e1 + 0.8 * e2
    q1 = amp.q_kernel(w, tau)
    assert abs(amp.q_kernel(w, 3.0 * tau) - q1 / 9.0) < 1e-9 * abs(q1)
    with pytest.raises(NotOrthogonal):
        amp.q_kernel(w, tau + 0.1 * w)
    with pytest.raises(DiagonalEvaluation):
        amp.kernel(w, w)


def test_zero_mean_numerator():
    amp = singular_amplitude_3d(example_potential_3d(1.0, -0.4, -0.6))
    for w in (np.array([0.0, 0.0, 1.0]), np.array([0.6, 0.0, 0.8])):
        assert abs(amp.numerator_mean(w)) < 1e-10


def test_short_range_fields_have_no_pv_kernel():
    a_inf = decompose_potential(FieldSpec.catalog("bump_3d")).a_inf
    amp = singular_amplitude_3d(a_inf)
    w = np.array([0.36, 0.48, 0.8])
    e1, e2 = circle_frame_3d(w)
    assert abs(amp.q_kernel(w, e1 + 0.3 * e2)) < 1e-6


def test_modified_ab_spectrum_3d():
    # I = pi alpha sqrt(1 - w3^2) cos(theta) ranges over [-pi alpha, pi alpha]
    sp = essential_spectrum_3d(modified_ab_potential_3d(0.5), grid_size=12, n_theta=16)
    assert sp.bounds == pytest.approx((-0.5 * math.pi, 0.5 * math.pi), abs=1e-8)
    assert np.allclose(sp.arcs, [(1.5 * math.pi, 0.5 * math.pi)], atol=1e-8)
    assert not sp.contains(math.pi)
    wide = essential_spectrum_3d(modified_ab_potential_3d(1.2), grid_size=12, n_theta=16)
    assert wide.full_circle


def test_example_spectrum_3d_bound():
    # |I| <= max over the sphere of the circle amplitude; check against dense sampling
    A = example_potential_3d(1.0, -0.4, -0.6)
    sp = essential_spectrum_3d(A, grid_size=16, n_theta=16)
    dense = essential_spectrum_3d(A, grid_size=200, n_theta=64, refine=False)
    assert sp.bounds[1] >= dense.bounds[1] - 1e-12
    assert sp.bounds[1] - dense.bounds[1] < 1e-2
    assert sp.bounds[0] == pytest.approx(-sp.bounds[1], abs=1e-7)


# ----------------------------------------------------------------------------
# cross sections and gauge covariance


def test_cross_section_forward_coefficient():
    spec = FieldSpec.catalog("ab_point_flux_2d", alpha=0.3)
    amp = singular_amplitude_2d(spec)
    lam = 2.0
    for sep in (1e-3, 1e-4):
        w, wp = _unit(0.0), _unit(sep)
        sigma = cross_section(amp.kernel(w, wp), lam, 2)
        coef = forward_cross_section_coefficient(amp.flux, lam)
        assert abs(sigma * np.linalg.norm(w - wp) ** 2 - coef) < 1e-12 * coef
    assert coef == pytest.approx(2 / math.pi / math.sqrt(lam) * math.sin(0.3 * math.pi) ** 2)
    with pytest.raises(ValueError):
        cross_section(1.0, -1.0, 2)


def test_gauge_covariance_dipole_example():
    # for a = -alpha + <p, xhat> the gauge phi0 = |p| sin(theta - theta_p) turns a into -alpha
    alpha, p = 0.25, np.array([0.1, 0.05])
    pn, tp = np.linalg.norm(p), math.atan2(p[1], p[0])
    amp = singular_amplitude_2d_from_a(lambda t: -alpha + p[0] * np.cos(t) + p[1] * np.sin(t))
    moved = gauge_covariance_transform(amp, lambda t: -pn * np.sin(np.asarray(t) - tp))
    th = np.linspace(0, TWO_PI, 7)
    assert np.allclose(moved.phase(th), 0.0, atol=1e-9)
    direct = singular_amplitude_2d_from_a(lambda t: -alpha + 0.0 * t)
    assert np.allclose(direct.phase(th), 0.0, atol=1e-12)
    assert moved.delta_coeff == direct.delta_coeff == pytest.approx(math.cos(alpha * math.pi))


def test_pure_gauge_sm():
    phi0 = lambda t: 0.3 * np.cos(t)
    assert abs(pure_gauge_sm(phi0, _unit(0.0)) - np.exp(0.6j)) < 1e-15
