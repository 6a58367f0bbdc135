"""Toroidal solenoid: an azimuthal field confined to a torus of revolution.

With the cone variable ``z = x3 / sqrt(x1^2 + x2^2)``, a ray of slope ``z``
enters the torus at distance ``kappa_-(z)`` and leaves at ``kappa_+(z)``.
Everything here (potentials, the gauge function ``U = G(z)``, the multiplier
``u``) is expressed through these two functions.

Orientation: the section flux integrates the field against the normal
``+e_phi`` (counterclockwise about the x3-axis).  The field is
``-alpha e_phi / rho``, so ``alpha > 0`` gives a negative section flux, and
``Phi_s = -U0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import numerics
from .amplitude import SpectralSet
from .fields import ConvexSection, DiscSection, FieldSpec, SectionShape, _ToroidalSolenoid3D
from .numerics import DEFAULT_CONFIG, QuadratureConfig, SurfacePatch

__all__ = [
    "SolenoidGeometry",
    "FluxReport",
    "torus_kappa",
    "torus_g",
    "torus_G",
    "torus_U0",
    "torus_u",
    "torus_q",
    "torus_flux_section",
    "torus_flux_disc_closed_form",
    "torus_spectrum",
    "cone_slope",
    "torus_region",
    "torus_transversal_potential",
    "torus_a_inf",
]


@dataclass(frozen=True)
class SolenoidGeometry:
    alpha: float
    shape: SectionShape

    @classmethod
    def disc(cls, l: float = 2.0, r: float = 1.0, alpha: float = 1.0) -> "SolenoidGeometry":
        return cls(float(alpha), DiscSection(float(l), float(r)))

    @classmethod
    def from_spec(cls, spec: FieldSpec) -> "SolenoidGeometry":
        if spec.family != "toroidal_solenoid_3d":
            raise ValueError("not a toroidal solenoid")
        return cls(spec.model.alpha, spec.model.shape)

    @property
    def z1(self) -> float:
        return self.shape.tangency[0]

    @property
    def z2(self) -> float:
        return self.shape.tangency[1]

    def field_spec(self) -> FieldSpec:
        params = dict(self.shape.params())
        params["alpha"] = self.alpha
        return FieldSpec.catalog("toroidal_solenoid_3d", **params)


def torus_kappa(z, shape: SectionShape):
    """``(kappa_minus, kappa_plus)`` for slopes in ``[z1, z2]``."""
    return shape.ray_interval(z)


def torus_g(z, geom: SolenoidGeometry):
    """``-alpha (kappa_+ - kappa_-)`` on ``(z1, z2)`` and zero elsewhere."""
    z = np.asarray(z, dtype=float)
    inside = (z > geom.z1) & (z < geom.z2)
    out = np.zeros_like(z)
    if np.any(inside):
        lo, hi = geom.shape.ray_interval(z[inside])
        out[inside] = -geom.alpha * (np.asarray(hi) - np.asarray(lo))
    return float(out) if out.ndim == 0 else out


def _G_integrand(geom):
    return lambda t: -np.asarray(torus_g(t, geom)) / np.sqrt(np.asarray(t) ** 2 + 1.0)


def torus_G(z, geom: SolenoidGeometry, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``-int_{z1}^{z} g(t) (t^2 + 1)^-1/2 dt``: zero below the cone, ``U0`` above it."""
    z = np.asarray(z, dtype=float)
    f = _G_integrand(geom)
    out = np.empty(z.shape)
    for idx, zi in np.ndenumerate(z):
        hi = min(float(zi), geom.z2)
        out[idx] = numerics.integrate_1d(f, geom.z1, hi, cfg)[0] if hi > geom.z1 else 0.0
    return float(out) if out.ndim == 0 else out


def torus_U0(geom: SolenoidGeometry, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    return float(torus_G(geom.z2, geom, cfg))


def torus_q(z, geom: SolenoidGeometry, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``G(z) - G(-z)``, with the limits ``+-U0`` at ``z = +-inf``."""
    z = np.asarray(z, dtype=float)
    return np.asarray(torus_G(z, geom, cfg)) - np.asarray(torus_G(-z, geom, cfg))


def torus_u(omega, geom: SolenoidGeometry, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Multiplier ``u(omega) = U(omega) - U(-omega)``; depends on ``omega3`` only."""
    out = torus_q(cone_slope(omega), geom, cfg)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class FluxReport:
    phi_quadrature: float
    U0: float
    defect: float
    error: float


def torus_flux_section(geom: SolenoidGeometry, cfg: QuadratureConfig = DEFAULT_CONFIG) -> FluxReport:
    """Section flux by surface quadrature of the field, alongside ``-U0``.

    The section sits in the half-plane ``x2 = 0, x1 > 0`` with normal
    ``+e2``; it is parametrized in polar form about an interior point.
    """
    model = _ToroidalSolenoid3D(alpha=geom.alpha, section=geom.shape)
    shape = geom.shape
    if isinstance(shape, DiscSection):
        center, radius = (shape.l, 0.0), (lambda v: np.full_like(np.asarray(v, dtype=float), shape.r))
    elif isinstance(shape, ConvexSection):
        center, radius = shape.center, shape.radius_fn
    else:
        raise TypeError("unsupported section shape")

    def point(u, v):
        R = np.asarray(radius(v))
        return np.stack(
            np.broadcast_arrays(center[0] + u * R * np.cos(v), 0.0 * u, center[1] + u * R * np.sin(v)), axis=-1
        )

    def area(u, v):
        R = np.asarray(radius(v))
        dS = u * R * R
        z = np.zeros_like(dS)
        return np.stack(np.broadcast_arrays(z, dS, z), axis=-1)

    patch = SurfacePatch(point, (0.0, 1.0), (0.0, 2.0 * math.pi), area_vector=area, periodic_v=True)
    phi, err = numerics.integrate_surface_patch(lambda x, dS: np.sum(model.eval(x) * dS, axis=-1), patch, cfg)
    U0 = torus_U0(geom, cfg)
    return FluxReport(float(phi), U0, float(phi) + U0, float(err))


def torus_flux_disc_closed_form(l: float, r: float, alpha: float) -> float:
    return -alpha * 2.0 * math.pi * (l - math.sqrt(l * l - r * r))


def torus_spectrum(flux) -> SpectralSet:
    """Arc ``[e^{-i|Phi_s|}, e^{i|Phi_s|}]``, or the whole circle once ``|Phi_s| >= pi``.

    Accepts the section flux or a :class:`SolenoidGeometry`.
    """
    if isinstance(flux, SolenoidGeometry):
        flux = -torus_U0(flux)
    c = abs(float(flux))
    if c >= math.pi:
        return SpectralSet((), True, (-c, c))
    return SpectralSet.from_intervals([(-c, c)], bounds=(-c, c))


# ----------------------------------------------------------------------------
# Closed-form potentials by region


def cone_slope(x):
    x = np.asarray(x, dtype=float)
    rho = np.hypot(x[..., 0], x[..., 1])
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(rho > 0, x[..., 2] / np.where(rho > 0, rho, 1.0), np.sign(x[..., 2]) * np.inf)


def torus_region(x, geom: SolenoidGeometry):
    """Label each point: ``outside_cone``, ``interior`` (before the torus), ``torus`` or ``exterior``."""
    x = np.asarray(x, dtype=float)
    flat = x.reshape(-1, 3)
    z = cone_slope(flat)
    r = np.linalg.norm(flat, axis=1)
    labels = np.full(len(flat), "outside_cone", dtype=object)
    cone = (z > geom.z1) & (z < geom.z2)
    if np.any(cone):
        lo, hi = geom.shape.ray_interval(z[cone])
        rc = r[cone]
        labels[cone] = np.where(rc <= lo, "interior", np.where(rc < hi, "torus", "exterior"))
    return labels.reshape(x.shape[:-1])


def _frame(flat):
    rho2 = flat[:, 0] ** 2 + flat[:, 1] ** 2
    return np.stack([flat[:, 0] * flat[:, 2] / rho2, flat[:, 1] * flat[:, 2] / rho2, -np.ones(len(flat))], axis=-1)


def torus_transversal_potential(x, geom: SolenoidGeometry):
    """Transversal potential from the region law (zero, ``A^(0)`` in the torus, ``A^inf`` beyond)."""
    x = np.asarray(x, dtype=float)
    flat = x.reshape(-1, 3)
    out = np.zeros_like(flat)
    labels = torus_region(flat, geom)
    r = np.linalg.norm(flat, axis=1)
    z = cone_slope(flat)
    for name in ("torus", "exterior"):
        m = labels == name
        if not np.any(m):
            continue
        lo, hi = geom.shape.ray_interval(z[m])
        if name == "torus":
            coef = -geom.alpha * (1.0 - lo / r[m])
        else:
            coef = -geom.alpha * (hi - lo) / r[m]
        out[m] = coef[:, None] * _frame(flat[m])
    return out.reshape(x.shape)


def torus_a_inf(x, geom: SolenoidGeometry):
    """Homogeneous part ``g(z)/|x| (x1 x3/rho^2, x2 x3/rho^2, -1)`` (zero off the cone)."""
    x = np.asarray(x, dtype=float)
    flat = x.reshape(-1, 3)
    out = np.zeros_like(flat)
    z = cone_slope(flat)
    m = (z > geom.z1) & (z < geom.z2)
    if np.any(m):
        g = np.asarray(torus_g(z[m], geom))
        out[m] = (g / np.linalg.norm(flat[m], axis=1))[:, None] * _frame(flat[m])
    return out.reshape(x.shape)
