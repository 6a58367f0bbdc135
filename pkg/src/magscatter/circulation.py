"""Circulation of the homogeneous potential along lines, and half-plane fluxes."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import numerics
from .errors import NotOrthogonal
from .fields import FieldSpec
from .numerics import DEFAULT_CONFIG, QuadratureConfig

__all__ = [
    "TangentPair",
    "line_circulation_I",
    "half_plane_flux_f",
    "arc_integral_f",
    "rotate_perp",
    "ORTHOGONALITY_TOL",
]

ORTHOGONALITY_TOL = 1e-10


@dataclass(frozen=True)
class TangentPair:
    """Unit vector ``omega`` with a unit vector ``z`` orthogonal to it."""

    omega: tuple
    z: tuple

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float)
        z = np.asarray(self.z, dtype=float)
        if w.shape != z.shape or w.ndim != 1:
            raise ValueError("omega and z must be vectors of equal length")
        if abs(np.linalg.norm(w) - 1) > 1e-12 or abs(np.linalg.norm(z) - 1) > 1e-12:
            raise ValueError("omega and z must be unit vectors")
        if abs(w @ z) > ORTHOGONALITY_TOL:
            raise NotOrthogonal("z must be orthogonal to omega", inner=float(w @ z))
        object.__setattr__(self, "omega", tuple(float(t) for t in w))
        object.__setattr__(self, "z", tuple(float(t) for t in z))


def rotate_perp(omega):
    """``(omega_plus, omega_minus)``: ``omega`` turned by +pi/2 and -pi/2."""
    w = np.asarray(omega, dtype=float)
    plus = np.stack([-w[..., 1], w[..., 0]], axis=-1)
    return plus, -plus


def line_circulation_I(a_inf: Callable, x, xi, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``I(x, xi) = int <a_inf(x + t xi), xi> dt`` over the whole line.

    The line is traversed with ``t = (|x|/|xi|) tan(phi)``, which turns the
    ``t^-2`` decay of a transversal degree -1 potential into a bounded
    integrand on ``(-pi/2, pi/2)``.  ``x`` and ``xi`` may be batches (same
    leading shape, or one of them a single vector).
    """
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    single = x.ndim == 1 and xi.ndim == 1
    X, XI = np.broadcast_arrays(np.atleast_2d(x), np.atleast_2d(xi))
    shape = X.shape[:-1]
    X = X.reshape(-1, X.shape[-1])
    XI = XI.reshape(-1, XI.shape[-1])
    nx = np.linalg.norm(X, axis=1)
    nxi = np.linalg.norm(XI, axis=1)
    if np.any(nx == 0) or np.any(nxi == 0):
        raise ValueError("x and xi must be nonzero")
    inner = np.abs(np.sum(X * XI, axis=1))
    bad = inner > ORTHOGONALITY_TOL * nx * nxi
    if np.any(bad):
        i = int(np.argmax(bad))
        raise NotOrthogonal("x must be orthogonal to xi", x=X[i].tolist(), xi=XI[i].tolist(), inner=float(inner[i]))
    out = np.empty(len(X))
    for i in range(len(X)):
        p, v, scale = X[i], XI[i], nx[i] / nxi[i]

        def integrand(phi, p=p, v=v, scale=scale):
            phi = np.asarray(phi, dtype=float)
            t = scale * np.tan(phi)
            pts = p + t[..., None] * v
            return (np.asarray(a_inf(pts)) @ v) * scale / np.cos(phi) ** 2

        edges = [0.0] + numerics.support_edges(integrand, -0.5 * math.pi, 0.5 * math.pi)
        val, _ = numerics.integrate_1d(integrand, -0.5 * math.pi, 0.5 * math.pi, cfg, points=edges)
        out[i] = val
    return float(out[0]) if single else out.reshape(shape)


def _angle(omega):
    w = np.asarray(omega, dtype=float)
    if abs(np.linalg.norm(w) - 1) > 1e-9:
        raise ValueError("omega must be a unit vector")
    return math.atan2(w[1], w[0])


def half_plane_flux_f(spec: FieldSpec, omega, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``f(omega) = int_{<x, omega> >= 0} B dx`` by polar quadrature over a half disc."""
    if spec.dimension != 2:
        raise ValueError("expected a 2D field")
    th = _angle(omega)
    model = spec.model
    if model.analytic_only:
        return -math.pi * model.alpha
    radius = model.effective_radius
    pts = np.unique(model.ray_breakpoints(np.array([[1.0, 0.0]])).ravel())
    val, _ = numerics.integrate_area_2d(
        model.eval, radius, cfg,
        theta_range=(th - 0.5 * math.pi, th + 0.5 * math.pi),
        radial_points=[p for p in pts if 0 < p < radius],
    )
    return float(val)


def arc_integral_f(a_func: Callable, omega, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Integral of ``a`` over the half circle from ``omega_minus`` to ``omega_plus``.

    ``a_func`` maps polar angles (arrays) to values of ``a``.
    """
    th = _angle(omega)
    val, _ = numerics.integrate_1d(a_func, th - 0.5 * math.pi, th + 0.5 * math.pi, cfg)
    return float(val)
