import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from magscatter.errors import AnalyticOnlyFamily, ConfigError, OutsideTangencyRange
from magscatter.fields import (
    ConvexSection,
    DiscSection,
    FieldSpec,
    circulation_flux_2d,
    divergence_residual,
    dump_field_config,
    eval_field,
    load_field_config,
    parse_field_config,
    ray_moment,
    total_flux_2d,
)
from magscatter.gauge import ab_potential_2d, transversal_potential


def test_catalog_dimensions():
    assert FieldSpec.catalog("gaussian2d").dimension == 2
    assert FieldSpec.catalog("bump_3d").dimension == 3
    with pytest.raises(ConfigError):
        FieldSpec(3, "gaussian2d", {})
    with pytest.raises(ConfigError):
        FieldSpec.catalog("nope")
    with pytest.raises(ConfigError):
        FieldSpec.catalog("gaussian2d", colour=1.0)


def test_spec_equality_normalizes_numbers():
    a = FieldSpec.catalog("radial_plus_dipole_2d", p=(0.1, 0.0), alpha=0.25)
    b = FieldSpec.catalog("radial_plus_dipole_2d", p=[0.1, 0], alpha=0.25)
    assert a == b and hash(a) == hash(b)


def test_total_fluxes():
    # Gaussian integral: int exp(-|x|^2 / w^2) = pi w^2
    val, err = total_flux_2d(FieldSpec.catalog("gaussian2d", amplitude=2.0, width=0.5))
    assert abs(val - 2.0 * math.pi * 0.25) < 1e-9 and err < 1e-6
    # radial part carries -2 pi alpha, the dipole part integrates to zero
    val, _ = total_flux_2d(FieldSpec.catalog("radial_plus_dipole_2d", alpha=0.25, p=(0.3, -0.2)))
    assert abs(val + 0.5 * math.pi) < 1e-9
    val, err = total_flux_2d(FieldSpec.catalog("ab_point_flux_2d", alpha=0.3))
    assert val == pytest.approx(-0.6 * math.pi, abs=1e-15) and err == 0.0


def test_radial_profile_bump_flux():
    # 2 pi int_0^1 (1 - r^2)^4 r dr = pi / 5
    val, _ = total_flux_2d(FieldSpec.catalog("radial_profile_2d", amplitude=1.0, radius=1.0, power=4))
    assert abs(val - math.pi / 5) < 1e-10


def test_tabulated_profile():
    r = np.linspace(0.0, 1.0, 41)
    spec = FieldSpec.catalog("radial_profile_2d", r_table=tuple(r), b_table=tuple(1 - r ** 2))
    x = np.array([[0.3, 0.4], [0.0, 0.9], [1.5, 0.0]])
    assert np.allclose(eval_field(spec, x), [0.75, 0.19, 0.0], atol=1e-12)
    val, _ = total_flux_2d(spec)
    assert abs(val - 0.5 * math.pi) < 1e-9
    with pytest.raises(ConfigError):
        FieldSpec.catalog("radial_profile_2d", r_table=(0.0, 1.0), b_table=(1.0, 0.0))


def test_analytic_only_family_has_no_ray_moment():
    spec = FieldSpec.catalog("ab_point_flux_2d", alpha=0.5)
    with pytest.raises(AnalyticOnlyFamily):
        ray_moment(spec, [[1.0, 0.0]], 0.0, np.inf)


def test_gaussian_ray_moment():
    # int_0^R exp(-t^2) t dt = (1 - exp(-R^2)) / 2
    spec = FieldSpec.catalog("gaussian2d")
    val = ray_moment(spec, [[0.6, 0.8]], 0.0, 1.3)
    assert abs(val[0] - 0.5 * (1 - math.exp(-1.69))) < 1e-13


def test_divergence_free_3d():
    rng = np.random.default_rng(3)
    for name in ("bump_3d", "toroidal_solenoid_3d"):
        spec = FieldSpec.catalog(name)
        x = rng.uniform(-2.5, 2.5, (60, 3))
        if name == "toroidal_solenoid_3d":
            rho = np.hypot(x[:, 0], x[:, 1])
            gap = np.abs(np.hypot(rho - 2.0, x[:, 2]) - 1.0)
            x = x[gap > 1e-2]
        assert np.max(np.abs(divergence_residual(spec, x))) < 1e-6


def _kappa_oracle(l, r, z):
    # t^2 - 2 t l / sqrt(1 + z^2) + l^2 - r^2 = 0 along the ray (1, z) / sqrt(1 + z^2)
    roots = np.roots([1.0, -2.0 * l / math.sqrt(1 + z * z), l * l - r * r])
    return sorted(roots.real)


@pytest.mark.parametrize("z", [-0.5, -0.2, 0.0, 0.31, 0.57])
def test_disc_ray_interval(z):
    shape = DiscSection(2.0, 1.0)
    lo, hi = shape.ray_interval(z)
    assert np.allclose([lo, hi], _kappa_oracle(2.0, 1.0, z), atol=1e-12)


def test_disc_tangency_and_range():
    shape = DiscSection(2.0, 1.0)
    assert np.allclose(shape.tangency, (-1 / math.sqrt(3), 1 / math.sqrt(3)), atol=1e-15)
    with pytest.raises(OutsideTangencyRange):
        shape.ray_interval(0.7)
    with pytest.raises(ValueError):
        DiscSection(1.0, 1.0)


def test_ellipse_matches_disc_when_round():
    disc = DiscSection(2.0, 1.0)
    ell = ConvexSection.ellipse(2.0, 1.0, 1.0)
    assert np.allclose(ell.tangency, disc.tangency, atol=1e-10)
    z = np.linspace(-0.55, 0.55, 9)
    assert np.allclose(np.array(ell.ray_interval(z)), np.array(disc.ray_interval(z)), atol=1e-10)


def test_ellipse_tangency_oracle():
    # lines x3 = z rho tangent to ((rho - l)/a)^2 + (x3/b)^2 = 1: z^2 = b^2 / (l^2 - a^2)
    ell = ConvexSection.ellipse(3.0, 1.0, 0.5)
    zt = 0.5 / math.sqrt(8.0)
    assert np.allclose(ell.tangency, (-zt, zt), atol=1e-10)


def test_stokes_duality_ab():
    A = ab_potential_2d(0.3)
    val, _ = circulation_flux_2d(A, 4.0)
    assert abs(val + 0.6 * math.pi) < 1e-12


def test_stokes_duality_gaussian_improves_with_radius():
    spec = FieldSpec.catalog("gaussian2d")
    flux, _ = total_flux_2d(spec)
    A = transversal_potential(spec)
    errs = [abs(circulation_flux_2d(A, R)[0] - flux) for R in (1.0, 2.0, 3.0)]
    assert errs[0] > errs[1] > errs[2]


def test_config_parse_and_errors(tmp_path):
    text = "[field]\ndimension = 2\nfamily = radial_plus_dipole_2d\nparam.alpha = 0.25\nparam.p = 0.1, 0.0\n"
    spec = parse_field_config(text)
    assert spec == FieldSpec.catalog("radial_plus_dipole_2d", alpha=0.25, p=(0.1, 0.0))
    path = tmp_path / "f.ini"
    path.write_text(text)
    assert load_field_config(path) == spec
    for bad in ("dimension = 2", "[field]\nfamily = gaussian2d", "[field]\ndimension = x\nfamily = gaussian2d",
                "[field]\ndimension = 2\nfamily = gaussian2d\nwidth = 1"):
        with pytest.raises(ConfigError):
            parse_field_config(bad)


@settings(max_examples=40, deadline=None)
@given(
    st.floats(-5, 5, allow_nan=False),
    st.floats(0.05, 3, allow_nan=False),
    st.tuples(st.floats(-1, 1), st.floats(-1, 1)),
)
def test_config_round_trip(alpha, radius, p):
    spec = FieldSpec.catalog("radial_plus_dipole_2d", alpha=alpha, radius=radius, p=p)
    text = dump_field_config(spec)
    again = parse_field_config(text)
    assert again == spec
    assert dump_field_config(again) == text


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 2 * math.pi), st.floats(0.0, 3.0))
def test_even_field_values(theta, r):
    spec = FieldSpec.catalog("gaussian2d")
    x = r * np.array([math.cos(theta), math.sin(theta)])
    assert eval_field(spec, x) == pytest.approx(math.exp(-r * r), rel=1e-14, abs=1e-300)
    assert eval_field(spec, -x) == eval_field(spec, x)
