"""Self-verification suites: every documented identity checked with its measured defect."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import numerics
from .amplitude import (
    SpectralSet,
    ab_eigenvalue,
    ab_kernel_closed_form,
    ab_partial_wave_sum,
    circle_frame_3d,
    essential_spectrum_2d,
    fibonacci_sphere,
    gauge_covariance_transform,
    singular_amplitude_2d,
    singular_amplitude_2d_from_a,
    singular_amplitude_3d,
)
from .circulation import half_plane_flux_f, line_circulation_I, rotate_perp
from .fields import FieldSpec, eval_field, total_flux_2d
from .gauge import (
    ShortRangePotential3D,
    decompose_potential,
    example_potential_3d,
    gauge_scalar_U,
    modified_ab_potential_3d,
    transversal_potential,
)
from .solenoid import (
    SolenoidGeometry,
    torus_flux_disc_closed_form,
    torus_flux_section,
    torus_q,
    torus_region,
    torus_spectrum,
    torus_transversal_potential,
    torus_u,
)

SUITES = ("gauge", "circulation", "amplitude", "solenoid")


@dataclass
class Check:
    suite: str
    name: str
    defect: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.defect < self.threshold)

    def to_dict(self):
        out = asdict(self)
        out["passed"] = self.passed
        return out


def _rng():
    return np.random.default_rng(20240601)


def _unit_angles(n):
    th = 2 * math.pi * np.arange(n) / n
    return np.stack([np.cos(th), np.sin(th)], axis=-1)


def _curl_defect(A, spec, pts):
    if spec.dimension == 2:
        c = numerics.fd_curl_2d(A, pts)
        B = eval_field(spec, pts)
        scale = max(np.abs(B).max(), 1e-300)
        return float(np.max(np.abs(c - B) / np.maximum(np.abs(B), scale)))
    c = numerics.fd_curl_3d(A, pts)
    B = eval_field(spec, pts)
    nb = np.linalg.norm(B, axis=-1)
    scale = max(nb.max(), 1e-300)
    return float(np.max(np.linalg.norm(c - B, axis=-1) / np.maximum(nb, scale)))


def off_boundary_points(spec, n, rng, box=3.5, margin=1e-3):
    """Random points, rejecting those within ``margin`` of a solenoid boundary."""
    pts = []
    model = spec.model
    while len(pts) < n:
        x = rng.uniform(-box, box, 3)
        if spec.family == "toroidal_solenoid_3d":
            rho = math.hypot(x[0], x[1])
            if abs(float(model.shape.contains(rho + margin, x[2])) - float(model.shape.contains(rho - margin, x[2]))) or \
               abs(float(model.shape.contains(rho, x[2] + margin)) - float(model.shape.contains(rho, x[2] - margin))):
                continue
        pts.append(x)
    return np.array(pts)


def gauge_suite():
    rng = _rng()
    out = []
    specs2 = [FieldSpec.catalog("gaussian2d"), FieldSpec.catalog("radial_plus_dipole_2d")]
    specs3 = [FieldSpec.catalog("bump_3d"), FieldSpec.catalog("toroidal_solenoid_3d")]
    worst = 0.0
    for s in specs2 + specs3:
        X = rng.uniform(-3, 3, (200, s.dimension))
        A = transversal_potential(s)(X)
        worst = max(worst, float(np.abs(np.sum(A * X, axis=-1)).max()))
    out.append(Check("gauge", "transversality max|<A,x>|", worst, 1e-12))
    for s in specs2:
        X = rng.uniform(-1.5, 1.5, (30, 2))
        out.append(Check("gauge", f"curl reconstruction {s.family}", _curl_defect(transversal_potential(s), s, X), 1e-4))
    for s in specs3:
        X = off_boundary_points(s, 30, rng)
        out.append(Check("gauge", f"curl reconstruction {s.family}", _curl_defect(transversal_potential(s), s, X), 1e-4))
    for s in specs2 + specs3:
        d = decompose_potential(s)
        X = rng.uniform(-3, 3, (20, s.dimension))
        hom = float(np.abs(d.a_inf(2 * X) - 0.5 * d.a_inf(X)).max())
        rec = float(np.abs(d.full(X) - d.a_inf(X) - d.a_reg(X)).max())
        out.append(Check("gauge", f"homogeneity {s.family}", hom, 1e-10))
        out.append(Check("gauge", f"decomposition {s.family}", rec, 1e-10))
    for s in specs3:
        d = decompose_potential(s)
        X = rng.normal(size=(4, 3))
        u1 = gauge_scalar_U(d, X)
        u2 = gauge_scalar_U(d, X, contour="arc_radial", waypoint=(1.0, 1.0, 0.0))
        out.append(Check("gauge", f"path independence {s.family}", float(np.abs(u1 - u2).max()), 1e-8))
        sr = ShortRangePotential3D(s)
        R = max(sr.cutoff.R2, s.support_radius)
        Y = rng.normal(size=(50, 3))
        Y *= (R * rng.uniform(1.001, 3.0, 50) / np.linalg.norm(Y, axis=1))[:, None]
        out.append(Check("gauge", f"compact support {s.family}", float(np.abs(sr(Y)).max()), 1e-12))
        # probes in the cutoff ramp, plus points where the field lives
        shell = rng.normal(size=(8, 3))
        shell *= (rng.uniform(sr.cutoff.R1, sr.cutoff.R2, 8) / np.linalg.norm(shell, axis=1))[:, None]
        live = off_boundary_points(s, 200, rng, box=min(3.5, R))
        live = live[np.linalg.norm(eval_field(s, live), axis=1) > 0][:8]
        Z = np.vstack([shell, live])
        out.append(Check("gauge", f"short-range curl {s.family}", _curl_defect(sr, s, Z), 1e-4))
    return out


def circulation_suite():
    out = []
    oms = _unit_angles(16)
    for name in ("gaussian2d", "radial_plus_dipole_2d"):
        s = FieldSpec.catalog(name)
        d = decompose_potential(s)
        flux, _ = total_flux_2d(s)
        split = line_gap = 0.0
        for w in oms:
            f = half_plane_flux_f(s, w)
            split = max(split, abs(f + half_plane_flux_f(s, -w) - flux))
            line_gap = max(line_gap, abs(line_circulation_I(d.a_inf, w, rotate_perp(w)[0]) - f))
        out.append(Check("circulation", f"flux split {name}", split, 1e-6))
        out.append(Check("circulation", f"I(w, w+) = f(w) {name}", line_gap, 1e-5))
    A = example_potential_3d(1.0, -0.4, -0.6)
    rng = _rng()
    hom = anti = closed = 0.0
    for _ in range(5):
        w = rng.normal(size=3)
        w /= np.linalg.norm(w)
        e1, e2 = circle_frame_3d(w)
        th = rng.uniform(0, 2 * math.pi)
        x = math.cos(th) * e1 + math.sin(th) * e2
        I = line_circulation_I(A, x, w)
        hom = max(hom, abs(line_circulation_I(A, 2 * x, 3 * w) - I))
        anti = max(anti, abs(line_circulation_I(A, x, -w) + I))
        exact = 2 * (1.0 * w[0] * x[1] * x[2] - 0.4 * w[1] * x[2] * x[0] - 0.6 * w[2] * x[0] * x[1])
        closed = max(closed, abs(I - exact))
    out.append(Check("circulation", "homogeneity I(2x, 3xi) = I(x, xi)", hom, 1e-8))
    out.append(Check("circulation", "antisymmetry I(x, -xi) = -I(x, xi)", anti, 1e-8))
    out.append(Check("circulation", "first 3D closed form", closed, 1e-6))
    return out


def amplitude_suite():
    out = []
    unit = max(abs(abs(ab_eigenvalue(m, a)) - 1) for m in range(-10, 11) for a in (0, 0.25, 0.5, 1, 1.5))
    out.append(Check("amplitude", "AB eigenvalues unit modulus", unit, 1e-15))
    D = np.linspace(0.5, 2 * math.pi - 0.5, 200)
    worst = max(
        float(np.abs(ab_partial_wave_sum(D, 0.0, a) - ab_kernel_closed_form(D, 0.0, a)[1]).max())
        for a in (0.25, 0.5, 0.75)
    )
    out.append(Check("amplitude", "AB partial waves vs closed form", worst, 1e-2))
    trace = coeff = 0.0
    for a in (0.1, 0.25, 0.5, 0.75, 1.3):
        amp = singular_amplitude_2d(FieldSpec.catalog("ab_point_flux_2d", alpha=a))
        trace = max(trace, abs(amp.delta_coeff ** 2 + (math.pi * amp.pv_coeff) ** 2 - 1))
        coeff = max(coeff, abs(amp.delta_coeff - math.cos(math.pi * a)),
                    abs(abs(amp.pv_coeff) - abs(math.sin(math.pi * a)) / math.pi))
    out.append(Check("amplitude", "unitarity trace", trace, 1e-14))
    out.append(Check("amplitude", "AB coefficients", coeff, 1e-10))
    degenerate = abs(singular_amplitude_2d(FieldSpec.catalog("ab_point_flux_2d", alpha=1.0)).pv_coeff)
    out.append(Check("amplitude", "integer flux has no P.V. part", degenerate, 1e-15))
    d = FieldSpec.catalog("radial_plus_dipole_2d", alpha=0.25, p=(0.1, 0.0))
    sp = essential_spectrum_2d(d, 64)
    conj = sp.conjugate()
    out.append(Check("amplitude", "2D spectrum conjugation symmetry",
                     float(np.abs(np.array(sp.arcs) - np.array(conj.arcs)).max()), 1e-9))
    out.append(Check("amplitude", "dipole spectrum endpoints",
                     max(abs(sp.bounds[1] - (-math.pi * 0.25 + 0.2)), abs(sp.bounds[0] - (-math.pi * 0.25 - 0.2))), 1e-6))
    a_func = lambda t: -0.25 + 0.1 * np.cos(t)
    amp = singular_amplitude_2d_from_a(a_func)
    moved = gauge_covariance_transform(amp, lambda t: 0.3 * np.sin(t) + 0.2 * np.cos(2 * t))
    out.append(Check("amplitude", "gauge covariance keeps coefficients",
                     max(abs(moved.delta_coeff - amp.delta_coeff), abs(moved.pv_coeff - amp.pv_coeff)), 1e-12))
    s3 = singular_amplitude_3d(decompose_potential(FieldSpec.catalog("bump_3d")).a_inf)
    qmax = mean = 0.0
    for w in fibonacci_sphere(3):
        e1, e2 = circle_frame_3d(w)
        for ang in (0.3, 1.9):
            qmax = max(qmax, abs(s3.q_kernel(w, math.cos(ang) * e1 + math.sin(ang) * e2)))
        mean = max(mean, abs(s3.numerator_mean(w)))
    out.append(Check("amplitude", "3D short-range kernel collapse", qmax, 1e-3))
    m3 = singular_amplitude_3d(modified_ab_potential_3d(0.5))
    for w in fibonacci_sphere(3):
        mean = max(mean, abs(m3.numerator_mean(w)))
    out.append(Check("amplitude", "zero mean of the 3D numerator", mean, 1e-10))
    return out


def solenoid_suite():
    out = []
    geom = SolenoidGeometry.disc(2.0, 1.0, 1.0)
    rep = torus_flux_section(geom)
    out.append(Check("solenoid", "Phi_s + U0", abs(rep.defect), 1e-6))
    out.append(Check("solenoid", "disc flux closed form",
                     abs(abs(rep.phi_quadrature) - abs(torus_flux_disc_closed_form(2.0, 1.0, 1.0))), 1e-5))
    spec = geom.field_spec()
    rng = _rng()
    X = off_boundary_points(spec, 200, rng)
    A = transversal_potential(spec)(X)
    out.append(Check("solenoid", "region law", float(np.abs(A - torus_transversal_potential(X, geom)).max()), 1e-8))
    sp = torus_spectrum(rep.phi_quadrature)
    out.append(Check("solenoid", "spectrum endpoints",
                     abs(sp.bounds[1] - abs(rep.phi_quadrature)), 1e-6))
    ring = 0.0
    for w3 in (-0.7, 0.2, 0.5):
        phis = np.linspace(0, 2 * math.pi, 7)
        n = math.sqrt(1 - w3 * w3)
        vals = torus_u(np.stack([n * np.cos(phis), n * np.sin(phis), np.full(7, w3)], axis=-1), geom)
        ring = max(ring, float(np.ptp(vals)))
    out.append(Check("solenoid", "u depends on omega3 only", ring, 1e-10))
    z = np.linspace(-1.0, 1.0, 41)
    q = torus_q(z, geom)
    out.append(Check("solenoid", "q monotone", float(max(0.0, -np.diff(q).min())), 1e-12))
    a_inf = decompose_potential(spec).a_inf
    collapse = 0.0
    for w in fibonacci_sphere(3):
        e1, e2 = circle_frame_3d(w)
        vals = [line_circulation_I(a_inf, math.cos(t) * e1 + math.sin(t) * e2, w) for t in (0.2, 1.4, 3.0, 4.4)]
        collapse = max(collapse, max(abs(v - torus_u(w, geom)) for v in vals))
    out.append(Check("solenoid", "I collapses to u(omega)", collapse, 1e-5))
    labels = torus_region(X, geom)
    sr = ShortRangePotential3D(spec)
    below = X[(labels == "outside_cone") & (X[:, 2] < 0)][:10]
    out.append(Check("solenoid", "short-range potential below the cone",
                     float(np.abs(sr(below)).max()) if len(below) else 0.0, 1e-8))
    return out


RUNNERS = {
    "gauge": gauge_suite,
    "circulation": circulation_suite,
    "amplitude": amplitude_suite,
    "solenoid": solenoid_suite,
}


def run_suite(suite: str):
    if suite == "all":
        return [c for name in SUITES for c in RUNNERS[name]()]
    if suite not in RUNNERS:
        raise ValueError(f"unknown suite {suite!r}")
    return RUNNERS[suite]()
