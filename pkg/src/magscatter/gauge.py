"""Vector potentials built from a magnetic field.

The transversal gauge integrates the field along rays from the origin.  Its
split into a part homogeneous of degree -1 (``a_inf``) and a faster decaying
remainder (``a_reg``) is obtained by cutting the same ray integral at ``|x|``.
In 3D, ``a_inf`` is a gradient away from the origin when the field is short
range; its potential ``U`` lets the long-range part be cut off smoothly,
which gives a potential that decays as fast as the field allows.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import numerics
from .errors import AnalyticOnlyFamily, ContourThroughOrigin, CurlNotZero, DecayTooSlow
from .fields import FieldSpec, ray_moment
from .numerics import DEFAULT_CONFIG, QuadratureConfig

__all__ = [
    "PotentialDecomposition",
    "CutoffSpec",
    "GaugeFunction",
    "ShortRangePotential3D",
    "DEFAULT_BASEPOINT",
    "transversal_potential_2d",
    "transversal_potential_3d",
    "transversal_potential",
    "asymptotic_coefficient_2d",
    "asymptotic_coefficient_from_potential",
    "decompose_potential",
    "gauge_scalar_U",
    "short_range_potential_3d",
    "apply_gauge",
    "ab_potential_2d",
    "example_potential_3d",
    "modified_ab_potential_3d",
    "homogeneous_decomposition",
]

DEFAULT_BASEPOINT = (0.0, 0.0, -1.0)


def _split(x, dim):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != dim:
        raise ValueError(f"points must have {dim} coordinates")
    flat = x.reshape(-1, dim)
    r = np.linalg.norm(flat, axis=1)
    safe = np.where(r > 0, r, 1.0)
    return x.shape[:-1], flat, r, flat / safe[:, None]


def _perp(x):
    return np.stack([-x[..., 1], x[..., 0]], axis=-1)


# ----------------------------------------------------------------------------
# Homogeneous reference potentials


def ab_potential_2d(alpha: float) -> Callable:
    """Point-flux potential ``-alpha (-x2, x1)/|x|^2`` (zero at the origin by convention)."""

    def A(x):
        x = np.asarray(x, dtype=float)
        r2 = np.sum(x * x, axis=-1)
        coef = np.where(r2 > 0, -alpha / np.where(r2 > 0, r2, 1.0), 0.0)
        return coef[..., None] * _perp(x)

    return A


def example_potential_3d(a1: float, a2: float, a3: float) -> Callable:
    """``|x|^-3 (a1 x2 x3, a2 x3 x1, a3 x1 x2)``; transversal when ``a1 + a2 + a3 = 0``."""
    if abs(a1 + a2 + a3) > 1e-12 * max(1.0, abs(a1), abs(a2), abs(a3)):
        raise ValueError("coefficients must sum to zero")

    def A(x):
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(x, axis=-1)
        c = np.where(r > 0, 1.0 / np.where(r > 0, r, 1.0) ** 3, 0.0)
        return c[..., None] * np.stack(
            [a1 * x[..., 1] * x[..., 2], a2 * x[..., 2] * x[..., 0], a3 * x[..., 0] * x[..., 1]], axis=-1
        )

    return A


def modified_ab_potential_3d(alpha: float) -> Callable:
    """``-alpha (-x2, x1, 0)/|x|^2``: the planar point flux lifted to 3D."""

    def A(x):
        x = np.asarray(x, dtype=float)
        r2 = np.sum(x * x, axis=-1)
        coef = np.where(r2 > 0, -alpha / np.where(r2 > 0, r2, 1.0), 0.0)
        return coef[..., None] * np.stack([-x[..., 1], x[..., 0], np.zeros_like(r2)], axis=-1)

    return A


# ----------------------------------------------------------------------------
# Transversal gauge


def _moment(spec, xhat, t0, t1, cfg):
    return ray_moment(spec, xhat, t0, t1, cfg)


def transversal_potential_2d(spec: FieldSpec, x, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``(-x2, x1) |x|^-2 int_0^|x| B(t xhat) t dt``."""
    if spec.dimension != 2:
        raise ValueError("expected a 2D field")
    if spec.analytic_only:
        raise AnalyticOnlyFamily("use ab_potential_2d for the point-flux family")
    shape, flat, r, xhat = _split(x, 2)
    m = _moment(spec, xhat, 0.0, r, cfg)
    coef = np.where(r > 0, m / np.where(r > 0, r * r, 1.0), 0.0)
    return (coef[:, None] * _perp(flat)).reshape(shape + (2,))


def transversal_potential_3d(spec: FieldSpec, x, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``J x x / |x|^2`` with ``J = int_0^|x| B(t xhat) t dt``; orthogonal to ``x`` by construction."""
    if spec.dimension != 3:
        raise ValueError("expected a 3D field")
    shape, flat, r, xhat = _split(x, 3)
    J = _moment(spec, xhat, 0.0, r, cfg)
    out = np.cross(J, xhat) / np.where(r > 0, r, np.inf)[:, None]
    return out.reshape(shape + (3,))


def transversal_potential(spec: FieldSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> Callable:
    """Transversal potential of ``spec`` as a batched callable."""
    if spec.dimension == 2:
        if spec.analytic_only:
            return ab_potential_2d(spec.model.alpha)
        return lambda x: transversal_potential_2d(spec, x, cfg)
    return lambda x: transversal_potential_3d(spec, x, cfg)


def asymptotic_coefficient_2d(spec: FieldSpec, direction, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``a(xhat) = int_0^inf B(t xhat) t dt`` for one or many unit directions."""
    if spec.dimension != 2:
        raise ValueError("expected a 2D field")
    _check_decay(spec)
    d = np.asarray(direction, dtype=float)
    if spec.analytic_only:
        return np.full(d.shape[:-1], -spec.model.alpha) if d.ndim > 1 else -spec.model.alpha
    shape, _, _, xhat = _split(d, 2)
    val = _moment(spec, xhat, 0.0, np.inf, cfg).reshape(shape)
    return float(val) if val.ndim == 0 else val


def asymptotic_coefficient_from_potential(A: Callable, radius: float) -> Callable:
    """``a(xhat) = R <A(R xhat), xhat_perp>`` read off a potential that is homogeneous beyond ``R``."""

    def a(theta):
        theta = np.asarray(theta, dtype=float)
        u = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
        val = np.asarray(A(radius * u))
        return radius * np.sum(val * _perp(u), axis=-1)

    return a


def _check_decay(spec):
    if not spec.analytic_only and spec.decay_exponent <= 2:
        raise DecayTooSlow(
            "the field must decay faster than |x|^-2",
            family=spec.family, decay_exponent=spec.decay_exponent,
        )


# ----------------------------------------------------------------------------
# Decomposition


@dataclass(frozen=True)
class PotentialDecomposition:
    """``full = a_inf + a_reg`` with ``a_inf`` homogeneous of degree -1 and transversal.

    All members are batched callables on arrays of shape ``(..., d)``.
    ``rho`` is the decay exponent of ``a_reg`` (infinite when it has compact
    support).
    """

    dimension: int
    a_inf: Callable
    a_reg: Callable
    full: Callable
    gauge_tag: str = "transversal"
    rho: float = math.inf


def decompose_potential(spec: FieldSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> PotentialDecomposition:
    """Split the transversal potential into its homogeneous and regular parts."""
    _check_decay(spec)
    rho = spec.decay_exponent - 1.0
    dim = spec.dimension
    if spec.analytic_only:
        A = ab_potential_2d(spec.model.alpha)
        return PotentialDecomposition(2, A, lambda x: np.zeros_like(np.asarray(x, dtype=float)), A, "transversal", math.inf)

    def a_inf(x):
        shape, flat, r, xhat = _split(x, dim)
        J = _moment(spec, xhat, 0.0, np.inf, cfg)
        return _assemble(dim, J, flat, r).reshape(shape + (dim,))

    def a_reg(x):
        shape, flat, r, xhat = _split(x, dim)
        J = _moment(spec, xhat, r, np.inf, cfg)
        return (-_assemble(dim, J, flat, r)).reshape(shape + (dim,))

    def full(x):
        shape, flat, r, xhat = _split(x, dim)
        J = _moment(spec, xhat, 0.0, r, cfg)
        return _assemble(dim, J, flat, r).reshape(shape + (dim,))

    return PotentialDecomposition(dim, a_inf, a_reg, full, "transversal", rho)


def _assemble(dim, J, flat, r):
    """``J (-x2, x1)/|x|^2`` in 2D, ``J x x/|x|^2`` in 3D; zero at the origin."""
    inv = np.where(r > 0, 1.0 / np.where(r > 0, r * r, 1.0), 0.0)
    if dim == 2:
        return (J * inv)[:, None] * _perp(flat)
    return np.cross(J, flat) * inv[:, None]


def homogeneous_decomposition(a_inf: Callable, dimension: int = 3) -> PotentialDecomposition:
    """Decomposition of a purely homogeneous potential (``a_reg = 0``)."""
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))
    return PotentialDecomposition(dimension, a_inf, zero, a_inf, "custom", math.inf)


# ----------------------------------------------------------------------------
# Scalar potential of a_inf (3D)


def _great_circle(u, v):
    """Angle and unit tangent ``e`` so that ``cos(s) u + sin(s) e`` runs from ``u`` to ``v``."""
    c = float(np.clip(u @ v, -1.0, 1.0))
    beta = math.acos(c)
    w = v - c * u
    nw = np.linalg.norm(w)
    if nw < 1e-12:
        # antipodal (or equal) endpoints: any great circle through u will do
        trial = np.eye(3)[int(np.argmin(np.abs(u)))]
        w = trial - (trial @ u) * u
        nw = np.linalg.norm(w)
    return beta, w / nw


def _arc_integral(A, u, v, R, cfg):
    beta, e = _great_circle(u, v)
    if beta == 0.0:
        return 0.0

    def integrand(s):
        s = np.asarray(s, dtype=float)
        c, sn = np.cos(s)[..., None], np.sin(s)[..., None]
        y = R * (c * u + sn * e)
        dy = R * (-sn * u + c * e)
        return np.sum(np.asarray(A(y)) * dy, axis=-1)

    val, _ = numerics.integrate_1d(integrand, 0.0, beta, cfg, points=numerics.support_edges(integrand, 0.0, beta))
    return float(val)


def _radial_integral(A, u, r0, r1, cfg):
    if r0 == r1:
        return 0.0
    lo, hi = min(r0, r1), max(r0, r1)

    def integrand(t):
        t = np.asarray(t, dtype=float)
        return np.asarray(A(t[..., None] * u)) @ u

    val, _ = numerics.integrate_1d(integrand, lo, hi, cfg)
    return float(val) if r1 > r0 else -float(val)


def _check_curl(A, pts, tol):
    pts = np.atleast_2d(pts)
    curl = numerics.fd_curl_3d(A, pts)
    val = np.linalg.norm(np.asarray(A(pts)), axis=-1)
    scale = val / np.linalg.norm(pts, axis=-1)
    bad = np.linalg.norm(curl, axis=-1) > tol * np.maximum(scale, 1.0) + 1e-8
    if np.any(bad):
        i = int(np.argmax(bad))
        raise CurlNotZero(
            "the homogeneous part is not curl free; no scalar potential exists",
            point=pts[i].tolist(), curl=curl[i].tolist(),
        )


def gauge_scalar_U(
    decomp: PotentialDecomposition,
    x,
    basepoint=DEFAULT_BASEPOINT,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    contour: str = "radial_arc",
    waypoint=None,
    check_curl: bool = True,
    curl_tol: float = 1e-4,
):
    """Curve integral of ``a_inf`` from ``basepoint`` to ``x`` (so ``U(basepoint) = 0``).

    ``contour`` is ``"radial_arc"`` (radial segment to the sphere through
    ``x``, then a great-circle arc) or ``"arc_radial"`` (arc on the sphere
    through the basepoint, then radial).  ``waypoint`` routes the arc through
    an extra direction.  Accepts one point or a batch.
    """
    if decomp.dimension != 3:
        raise ValueError("the scalar gauge function is built for 3D decompositions")
    x0 = np.asarray(basepoint, dtype=float)
    r0 = float(np.linalg.norm(x0))
    if r0 == 0.0:
        raise ContourThroughOrigin("basepoint must not be the origin")
    pts = np.asarray(x, dtype=float)
    flat = pts.reshape(-1, 3)
    u0 = x0 / r0
    A = decomp.a_inf
    # U is differentiated numerically downstream, so keep its quadrature noise
    # well below the finite-difference step
    cfg = cfg.replace(abs_tol=min(cfg.abs_tol, 1e-13), rel_tol=min(cfg.rel_tol, 1e-13))
    out = np.empty(len(flat))
    for i, p in enumerate(flat):
        r = float(np.linalg.norm(p))
        if r == 0.0:
            raise ContourThroughOrigin("U is undefined at the origin", point=p.tolist())
        u = p / r
        stops = [u0] + ([np.asarray(waypoint, float) / np.linalg.norm(waypoint)] if waypoint is not None else []) + [u]
        R = r if contour == "radial_arc" else r0
        total = _radial_integral(A, u0, r0, r, cfg) if contour == "radial_arc" else 0.0
        for a, b in zip(stops[:-1], stops[1:]):
            total += _arc_integral(A, a, b, R, cfg)
        if contour == "arc_radial":
            total += _radial_integral(A, u, r0, r, cfg)
        elif contour != "radial_arc":
            raise ValueError(f"unknown contour {contour!r}")
        if check_curl:
            beta, e = _great_circle(u0, u)
            probes = [R * (math.cos(s) * u0 + math.sin(s) * e) for s in (0.3 * beta, 0.7 * beta)] + [p]
            _check_curl(A, np.array(probes), curl_tol)
        out[i] = total
    return float(out[0]) if pts.ndim == 1 else out.reshape(pts.shape[:-1])


# ----------------------------------------------------------------------------
# Short-range potential (3D)


@dataclass(frozen=True)
class CutoffSpec:
    """Quintic smoothstep ramp from 0 on ``[0, R1]`` to 1 on ``[R2, inf)``."""

    R1: float
    R2: float

    def __post_init__(self):
        if not 0 < self.R1 < self.R2:
            raise ValueError("cutoff needs 0 < R1 < R2")

    @classmethod
    def default_for(cls, spec: FieldSpec) -> "CutoffSpec":
        model = spec.model
        shape = getattr(model, "shape", None)
        if shape is not None:
            # the ball |x| <= R2 must miss the solenoid
            d = shape.min_distance
            return cls(0.5 * d, 0.9 * d)
        R = model.support_radius if math.isfinite(model.support_radius) else model.effective_radius
        return cls(0.5 * R, R)

    def _s(self, r):
        return np.clip((np.asarray(r, dtype=float) - self.R1) / (self.R2 - self.R1), 0.0, 1.0)

    def eta(self, r):
        s = self._s(r)
        return s ** 3 * (10.0 - 15.0 * s + 6.0 * s * s)

    def deta(self, r):
        s = self._s(r)
        return 30.0 * s * s * (1.0 - s) ** 2 / (self.R2 - self.R1)


class ShortRangePotential3D:
    """``A = a_reg + (1 - eta) a_inf - U grad eta``.

    Equals the transversal potential inside the ball of radius ``R1`` and
    ``a_reg`` outside radius ``R2``; for compactly supported fields it
    vanishes outside ``max(R2, support radius)``.
    """

    def __init__(self, spec: FieldSpec, cutoff: Optional[CutoffSpec] = None,
                 basepoint=DEFAULT_BASEPOINT, cfg: QuadratureConfig = DEFAULT_CONFIG):
        if spec.dimension != 3:
            raise ValueError("expected a 3D field")
        self.spec = spec
        self.cutoff = cutoff or CutoffSpec.default_for(spec)
        self.basepoint = basepoint
        self.cfg = cfg
        self.decomp = decompose_potential(spec, cfg)

    def U(self, x, **kw):
        return gauge_scalar_U(self.decomp, x, self.basepoint, self.cfg, **kw)

    def __call__(self, x):
        shape, flat, r, xhat = _split(x, 3)
        out = np.zeros_like(flat)
        eta = self.cutoff.eta(r)
        deta = self.cutoff.deta(r)
        support = self.spec.support_radius
        live = r < max(self.cutoff.R2, support)
        if np.any(live):
            pts = flat[live]
            val = self.decomp.a_reg(pts) + (1.0 - eta[live])[:, None] * self.decomp.a_inf(pts)
            ramp = deta[live] > 0
            if np.any(ramp):
                U = np.atleast_1d(self.U(pts[ramp]))
                val[ramp] -= (U * deta[live][ramp])[:, None] * xhat[live][ramp]
            out[live] = val
        return out.reshape(shape + (3,))


def short_range_potential_3d(spec: FieldSpec, cutoff: Optional[CutoffSpec], x,
                             cfg: QuadratureConfig = DEFAULT_CONFIG, basepoint=DEFAULT_BASEPOINT):
    return ShortRangePotential3D(spec, cutoff, basepoint, cfg)(x)


# ----------------------------------------------------------------------------
# Gauge transformations


@dataclass(frozen=True)
class GaugeFunction:
    """Gauge function ``phi`` with its degree-0 asymptotics ``phi0`` on the unit sphere."""

    phi: Callable
    phi0: Optional[Callable] = None


def apply_gauge(A: Callable, g: GaugeFunction, h=None) -> Callable:
    """``A + grad phi`` with a central-difference gradient."""

    def shifted(x):
        x = np.asarray(x, dtype=float)
        return np.asarray(A(x)) + numerics.fd_grad(g.phi, x, h)

    return shifted
