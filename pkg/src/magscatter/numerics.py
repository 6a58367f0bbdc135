"""Quadrature, finite differences and ``-i0`` regularized pairings.

All integrators expect vectorized integrands: ``f`` receives a numpy array of
abscissae (or points) and returns an array of the same leading shape.  Scalar
callables that reject arrays are wrapped with :func:`numpy.vectorize`.

Integrators return ``(value, error)`` pairs in the style of
:func:`scipy.integrate.quad`.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DecayTooSlow, NonConvergence

__all__ = [
    "QuadratureConfig",
    "EpsilonSchedule",
    "SurfacePatch",
    "integrate_1d",
    "integrate_semi_infinite",
    "integrate_line",
    "integrate_circle",
    "integrate_area_2d",
    "integrate_surface_patch",
    "integrate_panels",
    "tail_bound",
    "support_edges",
    "fd_grad",
    "fd_div",
    "fd_curl_2d",
    "fd_curl_3d",
    "default_step",
    "regularized_i0_pairing",
    "extrapolate_to_zero",
    "max_workers",
]


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 4000
    truncation_radius: float = 10.0
    tail_decay_exponent: float = 2.0

    def __post_init__(self):
        if not self.abs_tol > 0 or not self.rel_tol > 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if not self.truncation_radius > 0:
            raise ValueError("truncation_radius must be positive")
        if not self.tail_decay_exponent > 1:
            raise DecayTooSlow(
                "tail decay exponent must exceed 1 for a convergent tail",
                tail_decay_exponent=self.tail_decay_exponent,
            )

    def tolerance(self, value) -> float:
        return max(self.abs_tol, self.rel_tol * float(np.max(np.abs(value))))

    def replace(self, **changes) -> "QuadratureConfig":
        fields = dict(self.__dict__)
        fields.update(changes)
        return QuadratureConfig(**fields)


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class EpsilonSchedule:
    """Geometric sequence of regularization parameters.

    ``eps_start`` is measured relative to the sup norm of the linear form the
    schedule is used with, so pairings are invariant under rescaling.
    ``stability_tol`` bounds the acceptable disagreement of the last two
    extrapolants (relative to ``max(1, |limit|)``).
    """

    eps_start: float = 2e-2
    ratio: float = 0.5
    steps: int = 6
    extrapolation_order: int = 2
    stability_tol: float = 1e-6

    def __post_init__(self):
        if not self.eps_start > 0:
            raise ValueError("eps_start must be positive")
        if not 0 < self.ratio < 1:
            raise ValueError("ratio must lie in (0, 1)")
        if self.steps < 3:
            raise ValueError("at least three epsilon steps are required")
        if self.extrapolation_order < 0 or self.extrapolation_order + 2 > self.steps:
            raise ValueError("extrapolation_order must leave two extrapolation windows")

    def values(self) -> np.ndarray:
        return self.eps_start * self.ratio ** np.arange(self.steps)


def max_workers() -> int:
    """Worker cap from ``MAGSCATTER_THREADS`` (defaults to 1)."""
    raw = os.environ.get("MAGSCATTER_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS = np.zeros(15)
_GAUSS[1:7:2] = _WG[:3]
_GAUSS[15 - 2:7:-2] = _WG[:3]
_GAUSS[7] = _WG[3]


def _evaluate(f, t):
    try:
        out = f(t)
    except (TypeError, ValueError):
        out = np.vectorize(f, otypes=[complex])(t)
        if np.all(np.imag(out) == 0):
            out = np.real(out)
    out = np.asarray(out)
    if out.shape[: t.ndim] != t.shape:
        out = np.broadcast_to(out, t.shape + out.shape[t.ndim:]).copy()
    return out


def _gk_batch(f, a, b):
    """Gauss-Kronrod estimates on the intervals ``[a_i, b_i]``.

    Returns Kronrod values of shape ``(n, *value_shape)``, the per-interval
    error ``|K15 - G7|`` (max over value components) and the roundoff floor
    below which that error is not meaningful.
    """
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    t = mid[:, None] + half[:, None] * _NODES[None, :]
    y = _evaluate(f, t)
    extra = y.ndim - 2
    k = np.tensordot(y, _KRONROD, axes=([1], [0])) if extra == 0 else np.einsum("ij...,j->i...", y, _KRONROD)
    g = np.tensordot(y, _GAUSS, axes=([1], [0])) if extra == 0 else np.einsum("ij...,j->i...", y, _GAUSS)
    scale = half.reshape((-1,) + (1,) * extra)
    k = k * scale
    g = g * scale
    diff = np.abs(k - g)
    err = diff.reshape(len(a), -1).max(axis=1) if extra else diff
    resabs = np.abs(y).reshape(len(a), 15, -1).max(axis=2) @ _KRONROD * np.abs(half)
    return k, err, 50.0 * np.finfo(float).eps * resabs


def integrate_1d(
    f: Callable,
    a: float,
    b: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    points: Optional[Sequence[float]] = None,
):
    """Adaptive Gauss-Kronrod quadrature of ``f`` over ``[a, b]``.

    Intervals whose error exceeds their length-proportional share of the
    tolerance are bisected together, so each refinement sweep costs a single
    vectorized call of ``f``.  ``points`` are interior breakpoints.
    """
    a = float(a)
    b = float(b)
    if a == b:
        return 0.0, 0.0
    if not a < b:
        raise ValueError(f"integrate_1d requires a < b, got a={a}, b={b}")
    edges = [a]
    if points is not None:
        edges.extend(sorted(p for p in points if a < p < b))
    edges.append(b)
    lo = np.asarray(edges[:-1], dtype=float)
    hi = np.asarray(edges[1:], dtype=float)
    keep = hi > lo
    lo, hi = lo[keep], hi[keep]
    vals, errs, floors = _gk_batch(f, lo, hi)
    length = b - a
    n_split = 0
    while True:
        total = vals.sum(axis=0)
        total_err = float(errs.sum())
        tol = cfg.tolerance(total)
        if total_err <= tol:
            break
        share = tol * (hi - lo) / length
        # intervals at the roundoff floor cannot be improved by bisection
        live = errs > floors
        bad = (errs > share) & live
        if not bad.any():
            bad = (errs == errs[live].max()) & live if live.any() else bad
        if not bad.any():
            break
        if n_split + int(bad.sum()) > cfg.max_subdivisions:
            raise NonConvergence(
                "adaptive quadrature exhausted its subdivision budget",
                a=a, b=b, estimate=_jsonable(total), error=total_err, tolerance=tol,
            )
        n_split += int(bad.sum())
        mid = 0.5 * (lo[bad] + hi[bad])
        new_lo = np.concatenate([lo[bad], mid])
        new_hi = np.concatenate([mid, hi[bad]])
        new_vals, new_errs, new_floors = _gk_batch(f, new_lo, new_hi)
        good = ~bad
        lo = np.concatenate([lo[good], new_lo])
        hi = np.concatenate([hi[good], new_hi])
        vals = np.concatenate([vals[good], new_vals])
        errs = np.concatenate([errs[good], new_errs])
        floors = np.concatenate([floors[good], new_floors])
    return _scalarize(total), total_err


def support_edges(f, a, b, n=128, steps=45):
    """Locate where ``f`` switches between zero and nonzero (e.g. a cone boundary).

    Potentials of confined fields vanish identically on whole sectors and
    may have a square-root onset at the edge, which adaptive rules resolve
    poorly unless the edge is a breakpoint.
    """
    s = np.linspace(a, b, n + 1)
    on = np.asarray(f(s)) != 0
    edges = []
    for i in np.flatnonzero(on[1:] != on[:-1]):
        lo, hi = s[i], s[i + 1]
        lo_on = on[i]
        for _ in range(steps):
            mid = 0.5 * (lo + hi)
            if (np.asarray(f(np.array([mid])))[0] != 0) == lo_on:
                lo = mid
            else:
                hi = mid
        edges.append(0.5 * (lo + hi))
    return edges


def _scalarize(v):
    v = np.asarray(v)
    if v.ndim == 0:
        return complex(v) if np.iscomplexobj(v) else float(v)
    return v


def _jsonable(v):
    v = np.asarray(v)
    if np.iscomplexobj(v):
        return [float(np.real(v).ravel()[0]), float(np.imag(v).ravel()[0])]
    return float(v.ravel()[0])


def tail_bound(f_at_radius: float, radius: float, decay_exponent: float) -> float:
    """Bound on ``int_R^inf |f|`` assuming ``|f(s)| <= |f(R)| (s/R)^-p``."""
    if decay_exponent <= 1:
        raise DecayTooSlow("tail bound requires decay exponent > 1", decay_exponent=decay_exponent)
    return abs(f_at_radius) * radius / (decay_exponent - 1.0)


def integrate_semi_infinite(
    f: Callable,
    a: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    radius: Optional[float] = None,
    points: Optional[Sequence[float]] = None,
):
    """Integral of ``f`` over ``[a, inf)``.

    ``[a, R]`` is integrated directly; the tail ``[R, inf)`` is mapped onto
    ``(0, 1]`` by ``s = R/u`` which is regular for any decay exponent
    ``p >= 2`` and integrable for ``p > 1``.  ``R`` is the larger of
    ``radius``/``cfg.truncation_radius`` and ``a + 1``.
    """
    if cfg.tail_decay_exponent <= 1:
        raise DecayTooSlow("integrand must decay faster than 1/s", exponent=cfg.tail_decay_exponent)
    R = max(cfg.truncation_radius if radius is None else radius, a + 1.0)
    head, head_err = integrate_1d(f, a, R, cfg, points=points)

    def mapped(u):
        y = _evaluate(f, R / u)
        w = R / (u * u)
        return y * w.reshape(w.shape + (1,) * (y.ndim - w.ndim))

    tail, tail_err = integrate_1d(mapped, 0.0, 1.0, cfg)
    return _scalarize(np.asarray(head) + np.asarray(tail)), head_err + tail_err


def integrate_line(
    f: Callable,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    radius: Optional[float] = None,
    points: Optional[Sequence[float]] = None,
):
    """Integral of ``f`` over the whole real line, split at the origin."""
    pts = [] if points is None else list(points)
    right, e1 = integrate_semi_infinite(f, 0.0, cfg, radius=radius, points=[p for p in pts if p > 0])
    left, e2 = integrate_semi_infinite(
        lambda t: f(-t), 0.0, cfg, radius=radius, points=[-p for p in pts if p < 0]
    )
    return _scalarize(np.asarray(right) + np.asarray(left)), e1 + e2


def integrate_circle(
    f: Callable,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    n_start: int = 16,
    max_nodes: int = 1 << 16,
):
    """Integral over one period ``[0, 2pi)`` by the periodic trapezoid rule.

    The node count is doubled until successive estimates agree; for smooth
    periodic integrands convergence is geometric.
    """
    n = n_start
    prev = _trapezoid_circle(f, n)
    while True:
        n *= 2
        cur = _trapezoid_circle(f, n)
        err = float(np.max(np.abs(cur - prev)))
        if err <= cfg.tolerance(cur):
            return _scalarize(cur), err
        if n >= max_nodes:
            raise NonConvergence(
                "periodic trapezoid rule did not converge", nodes=n, error=err
            )
        prev = cur


def _trapezoid_circle(f, n):
    theta = 2.0 * np.pi * np.arange(n) / n
    y = _evaluate(f, theta)
    return y.sum(axis=0) * (2.0 * np.pi / n)


# Gauss-Legendre rule used for the inner direction of 2D integrals.
_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)


def _inner_sector(g, u, v0, v1, tol, max_panels=1 << 12):
    """Composite Gauss-Legendre integral over ``v`` for every ``u`` node.

    ``g(u[:, None], v)`` must broadcast to ``(len(u), n_v)``.  Panels double
    until two successive estimates agree within ``tol``.
    """
    panels = 2
    prev = _composite_gl(g, u, v0, v1, panels)
    while True:
        panels *= 2
        cur = _composite_gl(g, u, v0, v1, panels)
        err = np.max(np.abs(cur - prev)) if cur.size else 0.0
        if err <= tol or panels >= max_panels:
            if err > tol:
                raise NonConvergence("inner quadrature did not converge", error=float(err))
            return cur
        prev = cur


def _composite_gl(g, u, v0, v1, panels):
    edges = np.linspace(v0, v1, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    v = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    w = (half[:, None] * _GL_W[None, :]).ravel()
    y = g(u[:, None], v[None, :])
    return np.asarray(y) @ w


def _inner_periodic(g, u, tol, max_nodes=1 << 14):
    n = 16
    prev = _trap_periodic(g, u, n)
    while True:
        n *= 2
        cur = _trap_periodic(g, u, n)
        err = np.max(np.abs(cur - prev)) if cur.size else 0.0
        if err <= tol or n >= max_nodes:
            if err > tol:
                raise NonConvergence("inner periodic quadrature did not converge", error=float(err))
            return cur
        prev = cur


def _trap_periodic(g, u, n):
    v = 2.0 * np.pi * np.arange(n) / n
    y = g(u[:, None], v[None, :])
    return np.asarray(y).sum(axis=1) * (2.0 * np.pi / n)


def integrate_area_2d(
    f: Callable,
    radius: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    theta_range: Optional[tuple] = None,
    radial_points: Optional[Sequence[float]] = None,
):
    """Integral of ``f`` over the disc ``|x| <= radius`` (or a sector of it).

    Polar coordinates: adaptive Gauss-Kronrod in ``r`` around an inner
    angular rule (periodic trapezoid for the full disc, composite
    Gauss-Legendre for a sector ``theta_range``).  ``f`` takes points of shape
    ``(..., 2)``.
    """
    inner_tol = 0.1 * cfg.abs_tol / max(radius, 1.0)

    def g(r, theta):
        pts = np.stack(np.broadcast_arrays(r * np.cos(theta), r * np.sin(theta)), axis=-1)
        return np.asarray(f(pts)) * r

    def radial(r):
        r = np.asarray(r, dtype=float)
        flat = r.ravel()
        if theta_range is None:
            out = _inner_periodic(g, flat, inner_tol)
        else:
            out = _inner_sector(g, flat, theta_range[0], theta_range[1], inner_tol)
        return out.reshape(r.shape)

    return integrate_1d(radial, 0.0, float(radius), cfg, points=radial_points)


@dataclass(frozen=True)
class SurfacePatch:
    """Parametrized surface ``x(u, v)`` on a rectangle of parameters.

    ``area_vector(u, v)`` returns the oriented area element
    ``dx/du x dx/dv``; when omitted it is approximated by central differences
    of ``point``.  ``periodic_v`` selects the trapezoid rule in ``v``.
    """

    point: Callable
    u_range: tuple
    v_range: tuple
    area_vector: Optional[Callable] = None
    periodic_v: bool = False

    def element(self, u, v):
        if self.area_vector is not None:
            return np.asarray(self.area_vector(u, v))
        hu = 1e-6 * max(1.0, abs(self.u_range[1] - self.u_range[0]))
        hv = 1e-6 * max(1.0, abs(self.v_range[1] - self.v_range[0]))
        du = (np.asarray(self.point(u + hu, v)) - np.asarray(self.point(u - hu, v))) / (2 * hu)
        dv = (np.asarray(self.point(u, v + hv)) - np.asarray(self.point(u, v - hv))) / (2 * hv)
        return np.cross(du, dv)


def integrate_surface_patch(f: Callable, patch: SurfacePatch, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Integral of ``f(x, dS)`` over a parametrized patch.

    ``f`` receives points ``(..., 3)`` and oriented area elements ``(..., 3)``;
    a flux is ``f = lambda x, dS: (B(x) * dS).sum(-1)``.
    """
    inner_tol = 0.1 * cfg.abs_tol

    def g(u, v):
        u, v = np.broadcast_arrays(u, v)
        return np.asarray(f(np.asarray(patch.point(u, v)), patch.element(u, v)))

    v0, v1 = patch.v_range

    def outer(u):
        u = np.asarray(u, dtype=float)
        flat = u.ravel()
        if patch.periodic_v:
            out = _inner_periodic(lambda uu, vv: g(uu, v0 + (v1 - v0) * vv / (2 * np.pi)), flat, inner_tol)
            out = out * (v1 - v0) / (2 * np.pi)
        else:
            out = _inner_sector(g, flat, v0, v1, inner_tol)
        return out.reshape(u.shape)

    return integrate_1d(outer, patch.u_range[0], patch.u_range[1], cfg)


def integrate_panels(f: Callable, edges: np.ndarray, cfg: QuadratureConfig = DEFAULT_CONFIG, max_level: int = 12):
    """Batched quadrature over rows of panel edges.

    ``edges`` has shape ``(n, k + 1)`` with non-decreasing rows; row ``i``
    integrates over ``[edges[i, 0], edges[i, -1]]`` with breakpoints at the
    interior edges.  ``f(i, t)`` is called with row indices ``i`` of shape
    ``(n, 1)`` and abscissae ``t`` of shape ``(n, m)`` and returns values of
    shape ``(n, m)`` or ``(n, m, c)``.  Every panel is uniformly subdivided
    (2, 4, 8, ... pieces) until the Gauss-Kronrod error of every row is within
    tolerance, keeping the rule identical across rows so results are smooth
    in the row parameters.
    """
    edges = np.asarray(edges, dtype=float)
    n, kp1 = edges.shape
    rows = np.arange(n)[:, None]
    level = 0
    while True:
        pieces = 1 << level
        frac = np.linspace(0.0, 1.0, pieces + 1)
        lo_p = edges[:, :-1, None] + (edges[:, 1:, None] - edges[:, :-1, None]) * frac[None, None, :-1]
        hi_p = edges[:, :-1, None] + (edges[:, 1:, None] - edges[:, :-1, None]) * frac[None, None, 1:]
        lo = lo_p.reshape(n, -1)
        hi = hi_p.reshape(n, -1)
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        t = (mid[:, :, None] + half[:, :, None] * _NODES[None, None, :]).reshape(n, -1)
        y = np.asarray(f(rows, t))
        extra = y.shape[2:]
        y = y.reshape((n, lo.shape[1], 15) + extra)
        hw = half.reshape(half.shape + (1,) * len(extra))
        k = np.einsum("ipj...,j->ip...", y, _KRONROD) * hw
        g = np.einsum("ipj...,j->ip...", y, _GAUSS) * hw
        val = k.sum(axis=1)
        err = np.abs(k - g).sum(axis=1)
        if extra:
            err = err.reshape(n, -1).max(axis=1)
        scale = np.abs(val).reshape(n, -1).max(axis=1) if extra else np.abs(val)
        tol = np.maximum(cfg.abs_tol, cfg.rel_tol * scale)
        if np.all(err <= tol):
            return val, err
        if level >= max_level:
            raise NonConvergence("panel quadrature did not converge", max_error=float(err.max()))
        level += 1


def default_step(x) -> np.ndarray:
    """Finite-difference step ``1e-5 * max(1, |x|)`` per point."""
    x = np.asarray(x, dtype=float)
    return 1e-5 * np.maximum(1.0, np.linalg.norm(x, axis=-1))


def _step(x, h):
    if h is None:
        return default_step(x)
    return np.broadcast_to(np.asarray(h, dtype=float), np.asarray(x).shape[:-1])


def _partial(F, x, j, h):
    e = np.zeros(x.shape[-1])
    e[j] = 1.0
    hh = h[..., None]
    plus = np.asarray(F(x + hh * e))
    minus = np.asarray(F(x - hh * e))
    hb = h.reshape(h.shape + (1,) * (plus.ndim - h.ndim))
    return (plus - minus) / (2.0 * hb)


def fd_grad(phi: Callable, x, h=None) -> np.ndarray:
    """Central-difference gradient of a scalar function."""
    x = np.asarray(x, dtype=float)
    h = _step(x, h)
    return np.stack([_partial(phi, x, j, h) for j in range(x.shape[-1])], axis=-1)


def fd_div(A: Callable, x, h=None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    h = _step(x, h)
    return sum(_partial(A, x, j, h)[..., j] for j in range(x.shape[-1]))


def fd_curl_2d(A: Callable, x, h=None) -> np.ndarray:
    """Scalar curl ``dA2/dx1 - dA1/dx2``."""
    x = np.asarray(x, dtype=float)
    h = _step(x, h)
    return _partial(A, x, 0, h)[..., 1] - _partial(A, x, 1, h)[..., 0]


def fd_curl_3d(A: Callable, x, h=None) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    h = _step(x, h)
    d = [_partial(A, x, j, h) for j in range(3)]
    return np.stack(
        [d[1][..., 2] - d[2][..., 1], d[2][..., 0] - d[0][..., 2], d[0][..., 1] - d[1][..., 0]],
        axis=-1,
    )


def extrapolate_to_zero(eps: np.ndarray, values: np.ndarray, order: int):
    """Polynomial extrapolation of ``values(eps)`` to ``eps = 0``.

    Each window of ``order + 1`` consecutive samples gives one extrapolant
    (Neville's algorithm at zero).  Returns the last extrapolant and its
    distance to the previous one as the error estimate.
    """
    eps = np.asarray(eps, dtype=float)
    values = np.asarray(values)
    k = order + 1
    ests = []
    for start in range(len(eps) - k + 1):
        xs = eps[start:start + k]
        p = values[start:start + k].astype(complex)
        for level in range(1, k):
            for i in range(k - level):
                p[i] = (xs[i + level] * p[i] - xs[i] * p[i + 1]) / (xs[i + level] - xs[i])
        ests.append(p[0])
    if len(ests) < 2:
        return ests[-1], math.inf
    return ests[-1], abs(ests[-1] - ests[-2])


def _linear_form_zeros(linear_form, grid=720):
    theta = 2.0 * np.pi * np.arange(grid + 1) / grid
    vals = np.asarray(linear_form(theta), dtype=float)
    zeros = []
    for i in range(grid):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            zeros.append(theta[i])
        elif a * b < 0:
            zeros.append(brentq(lambda t: float(linear_form(np.array([t]))[0]), theta[i], theta[i + 1], xtol=1e-15))
    return np.array(sorted(z % (2 * np.pi) for z in zeros)), float(np.max(np.abs(vals)))


def regularized_i0_pairing(
    numerator: Callable,
    linear_form: Callable,
    power: int,
    sched: EpsilonSchedule = EpsilonSchedule(),
    cfg: QuadratureConfig = DEFAULT_CONFIG,
):
    """``lim_{eps->0+} int_0^{2pi} N(t) (L(t) - i eps)^(-power) dt``.

    The regularized integrals are computed adaptively with breakpoints at the
    zeros of ``L`` and at ``zero +- eps/slope`` where the integrand varies
    fastest, then extrapolated in ``eps``.  Returns ``(limit, error)``.
    """
    if power < 1:
        raise ValueError("power must be a positive integer")
    zeros, scale = _linear_form_zeros(linear_form)
    if scale == 0.0:
        raise ValueError("linear form vanishes identically")
    eps_values = sched.values() * scale
    dt = 1e-7
    slopes = []
    for z in zeros:
        s = (float(linear_form(np.array([z + dt]))[0]) - float(linear_form(np.array([z - dt]))[0])) / (2 * dt)
        slopes.append(max(abs(s), 1e-300))

    results = []
    for eps in eps_values:
        pts = []
        for z, s in zip(zeros, slopes):
            w = eps / s
            for k in (-10.0, -1.0, 0.0, 1.0, 10.0):
                pts.append((z + k * w) % (2 * np.pi))

        def integrand(t, eps=eps):
            return np.asarray(numerator(t)) * (np.asarray(linear_form(t)) - 1j * eps) ** (-power)

        val, _ = integrate_1d(integrand, 0.0, 2.0 * np.pi, cfg, points=pts)
        results.append(val)
    limit, err = extrapolate_to_zero(eps_values, np.array(results), sched.extrapolation_order)
    if err > sched.stability_tol * max(1.0, abs(limit)):
        raise NonConvergence(
            "epsilon extrapolation did not stabilize",
            estimate=[limit.real, limit.imag], error=err,
        )
    return complex(limit), float(err)
