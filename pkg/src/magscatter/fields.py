"""Magnetic field catalog.

A :class:`FieldSpec` is a declarative record (dimension, family name,
parameters).  Each family is backed by a model class that evaluates the field
on arrays of points and reports where rays from the origin cross its
non-smooth set, which lets radial integrals be split into smooth panels.
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Mapping

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq, minimize_scalar
from scipy.special import beta as beta_fn

from . import numerics
from .errors import AnalyticOnlyFamily, ConfigError, OutsideTangencyRange
from .numerics import DEFAULT_CONFIG, QuadratureConfig

__all__ = [
    "FieldSpec",
    "SectionShape",
    "DiscSection",
    "ConvexSection",
    "FAMILIES",
    "eval_field",
    "divergence_residual",
    "total_flux_2d",
    "circulation_flux_2d",
    "ray_moment",
    "load_field_config",
    "parse_field_config",
    "dump_field_config",
]


# ----------------------------------------------------------------------------
# Solenoid cross-sections


class SectionShape:
    """Cross-section of an axially symmetric torus in the ``(rho, x3)`` half-plane."""

    kind = "abstract"

    def contains(self, rho, z):
        raise NotImplementedError

    @property
    def tangency(self) -> tuple:
        raise NotImplementedError

    def ray_interval(self, z):
        """Distances ``(kappa_minus, kappa_plus)`` where the ray of slope ``z`` meets the section."""
        raise NotImplementedError

    @property
    def max_distance(self) -> float:
        raise NotImplementedError

    @property
    def min_distance(self) -> float:
        raise NotImplementedError

    def params(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class DiscSection(SectionShape):
    l: float
    r: float
    kind = "disc"

    def __post_init__(self):
        if not self.l > self.r > 0:
            raise ValueError(f"disc section needs l > r > 0, got l={self.l}, r={self.r}")

    def contains(self, rho, z):
        return (np.asarray(rho) - self.l) ** 2 + np.asarray(z) ** 2 < self.r ** 2

    @property
    def tangency(self):
        z2 = self.r / math.sqrt(self.l ** 2 - self.r ** 2)
        return -z2, z2

    def ray_interval(self, z):
        z = np.asarray(z, dtype=float)
        disc = self.r ** 2 - (self.l ** 2 - self.r ** 2) * z ** 2
        z1, z2 = self.tangency
        if np.any((z < z1 - 1e-14) | (z > z2 + 1e-14)):
            raise OutsideTangencyRange("ray misses the section", z=_jsonable(z), z1=z1, z2=z2)
        root = np.sqrt(np.maximum(disc, 0.0))
        norm = 1.0 / np.sqrt(1.0 + z ** 2)
        return norm * (self.l - root), norm * (self.l + root)

    @property
    def max_distance(self):
        return self.l + self.r

    @property
    def min_distance(self):
        return self.l - self.r

    def params(self):
        return {"section": "disc", "l": self.l, "r": self.r}


class ConvexSection(SectionShape):
    """Strictly convex section given in polar form about an interior point.

    The boundary is ``center + R(phi) (cos phi, sin phi)`` in ``(rho, x3)``
    coordinates.  Ray intersections are located by root finding on the
    boundary parametrization; tangency slopes by maximizing the slope
    ``x3/rho`` along the boundary.
    """

    kind = "convex_boundary"

    def __init__(self, center, radius_fn: Callable, label: str = "convex", extra_params=None, grid: int = 1440):
        self.center = (float(center[0]), float(center[1]))
        self.radius_fn = radius_fn
        self.label = label
        self._extra = dict(extra_params or {})
        self._phi = 2.0 * np.pi * np.arange(grid) / grid
        pts = self._boundary(self._phi)
        if np.any(pts[:, 0] <= 0):
            raise ValueError("section must not intersect the symmetry axis")

    @classmethod
    def ellipse(cls, l: float, a: float, b: float, z0: float = 0.0):
        """Ellipse centred at ``(l, z0)`` with semi-axes ``a`` (radial) and ``b`` (axial)."""
        if not l > a > 0 or not b > 0:
            raise ValueError("ellipse section needs l > a > 0 and b > 0")

        def radius(phi):
            return a * b / np.sqrt((b * np.cos(phi)) ** 2 + (a * np.sin(phi)) ** 2)

        return cls((l, z0), radius, label="ellipse", extra_params={"l": l, "a": a, "b": b, "z0": z0})

    def _boundary(self, phi):
        phi = np.asarray(phi, dtype=float)
        R = np.asarray(self.radius_fn(phi), dtype=float)
        return np.stack([self.center[0] + R * np.cos(phi), self.center[1] + R * np.sin(phi)], axis=-1)

    def contains(self, rho, z):
        drho = np.asarray(rho, dtype=float) - self.center[0]
        dz = np.asarray(z, dtype=float) - self.center[1]
        return np.hypot(drho, dz) < np.asarray(self.radius_fn(np.arctan2(dz, drho)))

    def _slope(self, phi):
        p = self._boundary(phi)
        return p[..., 1] / p[..., 0]

    @cached_property
    def tangency(self):
        slopes = self._slope(self._phi)
        out = []
        for sign, idx in ((1.0, int(np.argmin(slopes))), (-1.0, int(np.argmax(slopes)))):
            step = self._phi[1] - self._phi[0]
            res = minimize_scalar(
                lambda t: sign * float(self._slope(t)),
                bounds=(self._phi[idx] - step, self._phi[idx] + step),
                method="bounded",
                options={"xatol": 1e-13},
            )
            out.append(float(self._slope(res.x)))
        return out[0], out[1]

    def _cross(self, phi, z):
        p = self._boundary(phi)
        return p[..., 1] - z * p[..., 0]

    def _ray_interval_scalar(self, z):
        z1, z2 = self.tangency
        if z < z1 - 1e-12 or z > z2 + 1e-12:
            raise OutsideTangencyRange("ray misses the section", z=z, z1=z1, z2=z2)
        vals = self._cross(self._phi, z)
        roots = []
        n = len(self._phi)
        for i in range(n):
            a, b = vals[i], vals[(i + 1) % n]
            if a == 0.0:
                roots.append(self._phi[i])
            elif a * b < 0:
                hi = self._phi[i] + (self._phi[1] - self._phi[0])
                roots.append(brentq(lambda t: float(self._cross(t, z)), self._phi[i], hi, xtol=1e-15))
        if len(roots) < 2:
            # tangential ray: the two intersections merge
            phi = self._phi[int(np.argmin(np.abs(vals)))]
            roots = [phi, phi]
        pts = self._boundary(np.array(roots))
        dist = np.hypot(pts[:, 0], pts[:, 1])
        return float(dist.min()), float(dist.max())

    def ray_interval(self, z):
        z = np.asarray(z, dtype=float)
        if z.ndim == 0:
            return self._ray_interval_scalar(float(z))
        lo = np.empty_like(z)
        hi = np.empty_like(z)
        for i, zi in np.ndenumerate(z):
            lo[i], hi[i] = self._ray_interval_scalar(float(zi))
        return lo, hi

    @cached_property
    def max_distance(self):
        p = self._boundary(self._phi)
        return float(np.hypot(p[:, 0], p[:, 1]).max()) * (1 + 1e-9)

    @cached_property
    def min_distance(self):
        p = self._boundary(self._phi)
        return float(np.hypot(p[:, 0], p[:, 1]).min()) * (1 - 1e-9)

    def params(self):
        out = {"section": self.label}
        out.update(self._extra)
        return out


def _jsonable(z):
    z = np.asarray(z)
    return float(z) if z.ndim == 0 else z.tolist()


# ----------------------------------------------------------------------------
# Field models


class _Model:
    dimension = 2
    support_radius = math.inf
    decay_exponent = math.inf
    analytic_only = False

    @property
    def effective_radius(self):
        return self.support_radius

    def eval(self, x):
        raise NotImplementedError

    def ray_breakpoints(self, xhat):
        """Distances along unit directions where the field is not smooth; shape ``(n, k)``."""
        return np.zeros((len(xhat), 0))

    def ray_field(self, xhat, t):
        """Field at ``t[i, j] * xhat[i]``; ``xhat`` is ``(n, d)`` and ``t`` is ``(n, m)``."""
        return self.eval(t[..., None] * xhat[:, None, :])


class _Gaussian2D(_Model):
    def __init__(self, amplitude=1.0, width=1.0):
        if not width > 0:
            raise ValueError("gaussian width must be positive")
        self.amplitude = float(amplitude)
        self.width = float(width)

    @property
    def effective_radius(self):
        # amplitude * w^2/2 * exp(-49) is far below any tolerance in use
        return 7.0 * self.width

    def tail_bound(self, radius):
        return abs(self.amplitude) * math.pi * self.width ** 2 * math.exp(-(radius / self.width) ** 2)

    def eval(self, x):
        x = np.asarray(x, dtype=float)
        return self.amplitude * np.exp(-np.sum(x * x, axis=-1) / self.width ** 2)

    def flux(self):
        return self.amplitude * math.pi * self.width ** 2


def _bump(r, radius, power):
    u = 1.0 - (np.asarray(r) / radius) ** 2
    return np.where(u > 0, np.maximum(u, 0.0) ** power, 0.0)


class _RadialProfile2D(_Model):
    def __init__(self, amplitude=1.0, radius=1.0, power=4.0, r_table=None, b_table=None):
        if r_table is not None:
            r_table = np.atleast_1d(np.asarray(r_table, dtype=float))
            b_table = np.atleast_1d(np.asarray(b_table, dtype=float))
            if r_table.shape != b_table.shape or len(r_table) < 3:
                raise ValueError("tabulated profile needs matching r/B tables with >= 3 entries")
            if r_table[0] != 0.0 or np.any(np.diff(r_table) <= 0):
                raise ValueError("tabulated radii must start at 0 and increase")
            self.spline = CubicSpline(r_table, b_table, bc_type=((1, 0.0), "not-a-knot"))
            self.support_radius = float(r_table[-1])
            self.knots = r_table[1:-1]
            self.tabulated = True
        else:
            if not radius > 0:
                raise ValueError("bump radius must be positive")
            self.amplitude = float(amplitude)
            self.radius = float(radius)
            self.power = float(power)
            self.support_radius = self.radius
            self.knots = np.zeros(0)
            self.tabulated = False

    def profile(self, r):
        r = np.asarray(r, dtype=float)
        if self.tabulated:
            inside = r < self.support_radius
            return np.where(inside, self.spline(np.minimum(r, self.support_radius)), 0.0)
        return self.amplitude * _bump(r, self.radius, self.power)

    def eval(self, x):
        x = np.asarray(x, dtype=float)
        return self.profile(np.linalg.norm(x, axis=-1))

    def ray_breakpoints(self, xhat):
        k = np.concatenate([self.knots, [self.support_radius]])
        return np.broadcast_to(k, (len(xhat), len(k)))


# int_0^1 u^2 (1 - u^2)^4 du
_DIPOLE_MOMENT = 0.5 * beta_fn(1.5, 5.0)


class _RadialPlusDipole2D(_Model):
    """``B0(r) + B1(r) <q, x/|x|>`` with polynomial compact profiles.

    ``B0 = c0 (1 - r^2/R^2)^4`` and ``B1 = c1 r (1 - r^2/R^2)^4`` are scaled so
    that ``-int B0 r dr = alpha`` and ``q int B1 r dr = p``; ``B1`` vanishes at
    the origin so the field is smooth.
    """

    def __init__(self, alpha=0.25, p=(0.1, 0.0), radius=1.0):
        self.alpha = float(alpha)
        self.p = np.asarray(p, dtype=float).reshape(2)
        self.radius = float(radius)
        if not self.radius > 0:
            raise ValueError("profile radius must be positive")
        self.support_radius = self.radius
        self.c0 = -10.0 * self.alpha / self.radius ** 2
        self.c1 = 1.0 / (self.radius ** 3 * _DIPOLE_MOMENT)

    def b0(self, r):
        return self.c0 * _bump(r, self.radius, 4)

    def b1(self, r):
        return self.c1 * np.asarray(r) * _bump(r, self.radius, 4)

    def eval(self, x):
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(x, axis=-1)
        return self.b0(r) + self.c1 * _bump(r, self.radius, 4) * (x @ self.p)

    def ray_breakpoints(self, xhat):
        return np.full((len(xhat), 1), self.radius)


class _ABPointFlux2D(_Model):
    analytic_only = True

    def __init__(self, alpha=0.5):
        self.alpha = float(alpha)
        self.support_radius = 0.0

    def eval(self, x):
        raise AnalyticOnlyFamily("the point-flux field is a distribution; use its analytic branches")

    def flux(self):
        return -2.0 * math.pi * self.alpha


class _ToroidalSolenoid3D(_Model):
    dimension = 3

    def __init__(self, alpha=1.0, section="disc", l=2.0, r=1.0, a=None, b=None, z0=0.0):
        self.alpha = float(alpha)
        if isinstance(section, SectionShape):
            self.shape = section
        elif section == "disc":
            self.shape = DiscSection(float(l), float(r))
        elif section == "ellipse":
            self.shape = ConvexSection.ellipse(float(l), float(a if a is not None else r), float(b if b is not None else r), float(z0))
        else:
            raise ValueError(f"unknown section kind {section!r}")
        self.support_radius = self.shape.max_distance

    def inside(self, x):
        x = np.asarray(x, dtype=float)
        rho = np.hypot(x[..., 0], x[..., 1])
        return self.shape.contains(rho, x[..., 2])

    def eval(self, x):
        x = np.asarray(x, dtype=float)
        rho2 = x[..., 0] ** 2 + x[..., 1] ** 2
        inside = self.inside(x)
        safe = np.where(inside, rho2, 1.0)
        coef = np.where(inside, -self.alpha / safe, 0.0)
        return np.stack([-x[..., 1] * coef, x[..., 0] * coef, np.zeros_like(coef)], axis=-1)

    def slope(self, x):
        x = np.asarray(x, dtype=float)
        rho = np.hypot(x[..., 0], x[..., 1])
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(rho > 0, x[..., 2] / np.where(rho > 0, rho, 1.0), np.sign(x[..., 2]) * np.inf)

    def ray_breakpoints(self, xhat):
        z = self.slope(xhat)
        z1, z2 = self.shape.tangency
        hit = (z > z1) & (z < z2)
        out = np.zeros((len(xhat), 2))
        if np.any(hit):
            lo, hi = self.shape.ray_interval(z[hit])
            out[hit, 0] = lo
            out[hit, 1] = hi
        return out

    def ray_field(self, xhat, t):
        # membership from the same kappa values used as breakpoints, so a
        # grazing ray never sees a sliver where the two tests disagree
        bps = self.ray_breakpoints(xhat)
        inside = (t > bps[:, :1]) & (t < bps[:, 1:])
        rho2 = t * t * (xhat[:, 0] ** 2 + xhat[:, 1] ** 2)[:, None]
        coef = np.where(inside, -self.alpha / np.where(inside, rho2, 1.0), 0.0) * t
        return np.stack([-xhat[:, 1:2] * coef, xhat[:, 0:1] * coef, np.zeros_like(coef)], axis=-1)


class _Bump3D(_Model):
    """``curl(phi m) = grad(phi) x m`` with ``phi = (1 - |x-c|^2/R^2)^4``."""

    dimension = 3

    def __init__(self, center=(0.4, -0.3, 0.2), moment=(0.3, -0.5, 0.8), radius=1.2):
        self.center = np.asarray(center, dtype=float).reshape(3)
        self.moment = np.asarray(moment, dtype=float).reshape(3)
        self.radius = float(radius)
        if not self.radius > 0:
            raise ValueError("bump radius must be positive")
        self.support_radius = float(np.linalg.norm(self.center)) + self.radius

    def eval(self, x):
        x = np.asarray(x, dtype=float)
        d = x - self.center
        u = 1.0 - np.sum(d * d, axis=-1) / self.radius ** 2
        coef = np.where(u > 0, -8.0 / self.radius ** 2 * np.maximum(u, 0.0) ** 3, 0.0)
        return coef[..., None] * np.cross(d, self.moment)

    def ray_breakpoints(self, xhat):
        xhat = np.asarray(xhat, dtype=float)
        proj = xhat @ self.center
        disc = proj ** 2 - self.center @ self.center + self.radius ** 2
        root = np.sqrt(np.maximum(disc, 0.0))
        out = np.stack([np.maximum(proj - root, 0.0), np.maximum(proj + root, 0.0)], axis=-1)
        return np.where((disc > 0)[:, None], out, 0.0)


FAMILIES = {
    "gaussian2d": (2, _Gaussian2D),
    "radial_profile_2d": (2, _RadialProfile2D),
    "radial_plus_dipole_2d": (2, _RadialPlusDipole2D),
    "ab_point_flux_2d": (2, _ABPointFlux2D),
    "toroidal_solenoid_3d": (3, _ToroidalSolenoid3D),
    "bump_3d": (3, _Bump3D),
}


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """Declarative magnetic field: dimension, family and its parameters.

    ``params`` may additionally carry ``decay_exponent`` to declare a slower
    decay than the family's own (used to exercise long-range guards).
    """

    dimension: int
    family: str
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown field family {self.family!r}", known=sorted(FAMILIES))
        dim, _ = FAMILIES[self.family]
        if self.dimension != dim:
            raise ConfigError(
                f"family {self.family} is {dim}-dimensional, got dimension={self.dimension}",
            )
        object.__setattr__(self, "params", dict(self.params))
        self.model  # validates parameters eagerly

    @classmethod
    def catalog(cls, family: str, **params) -> "FieldSpec":
        if family not in FAMILIES:
            raise ConfigError(f"unknown field family {family!r}", known=sorted(FAMILIES))
        return cls(FAMILIES[family][0], family, params)

    @cached_property
    def model(self) -> _Model:
        _, klass = FAMILIES[self.family]
        kwargs = {k: v for k, v in self.params.items() if k != "decay_exponent"}
        try:
            return klass(**kwargs)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad parameters for {self.family}: {exc}") from None

    @property
    def decay_exponent(self) -> float:
        return float(self.params.get("decay_exponent", self.model.decay_exponent))

    @property
    def support_radius(self) -> float:
        return self.model.support_radius

    @property
    def analytic_only(self) -> bool:
        return self.model.analytic_only

    def __eq__(self, other):
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (
            self.dimension == other.dimension
            and self.family == other.family
            and _normalize(self.params) == _normalize(other.params)
        )

    def __hash__(self):
        return hash((self.dimension, self.family, tuple(sorted(_normalize(self.params).items()))))


def _normalize(params):
    out = {}
    for k, v in params.items():
        if isinstance(v, (list, tuple, np.ndarray)):
            out[k] = tuple(float(t) for t in np.ravel(v))
        elif isinstance(v, (int, float, np.floating)):
            out[k] = float(v)
        else:
            out[k] = v
    return out


# ----------------------------------------------------------------------------
# Operations


def eval_field(spec: FieldSpec, x):
    """Field value(s) at ``x`` (shape ``(..., d)``): scalar in 2D, vector in 3D."""
    model = spec.model
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != spec.dimension:
        raise ValueError(f"points must have {spec.dimension} coordinates")
    value = model.eval(x)
    if math.isfinite(model.support_radius):
        outside = np.linalg.norm(x, axis=-1) > model.support_radius
        if spec.dimension == 3:
            outside = outside[..., None]
        value = np.where(outside, 0.0, value)
    return value


def divergence_residual(spec: FieldSpec, x, h=None):
    """Central-difference divergence of a 3D field."""
    if spec.dimension != 3:
        raise ValueError("divergence residual is defined for 3D fields")
    return numerics.fd_div(lambda y: eval_field(spec, y), x, h)


def ray_moment(spec: FieldSpec, xhat, t0, t1, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``int_{t0}^{t1} B(t xhat) t dt`` for a batch of unit directions.

    ``t1`` may be infinite; integration stops at the field's effective radius
    (its support radius for compactly supported families).  Returns shape
    ``(n,)`` in 2D and ``(n, 3)`` in 3D.
    """
    model = spec.model
    if model.analytic_only:
        raise AnalyticOnlyFamily(f"{spec.family} has no pointwise field to integrate")
    xhat = np.atleast_2d(np.asarray(xhat, dtype=float))
    n = len(xhat)
    reach = model.effective_radius
    t0 = np.minimum(np.broadcast_to(np.asarray(t0, dtype=float), (n,)), reach)
    t1 = np.minimum(np.broadcast_to(np.asarray(t1, dtype=float), (n,)), reach)
    bps = model.ray_breakpoints(xhat)
    inner = np.clip(bps, t0[:, None], t1[:, None])
    edges = np.sort(np.concatenate([t0[:, None], inner, t1[:, None]], axis=1), axis=1)

    def integrand(i, t):
        val = model.ray_field(xhat[i[:, 0]], t)
        return val * (t if spec.dimension == 2 else t[..., None])

    val, _ = numerics.integrate_panels(integrand, edges, cfg)
    return val


def total_flux_2d(spec: FieldSpec, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Total flux ``int B dx`` of a 2D field; returns ``(flux, error)``."""
    if spec.dimension != 2:
        raise ValueError("total flux is defined for 2D fields")
    model = spec.model
    if model.analytic_only:
        return model.flux(), 0.0
    radius = model.effective_radius
    pts = np.unique(model.ray_breakpoints(np.array([[1.0, 0.0]])).ravel())
    value, err = numerics.integrate_area_2d(
        lambda x: model.eval(x), radius, cfg, radial_points=[p for p in pts if 0 < p < radius]
    )
    if hasattr(model, "tail_bound"):
        err += model.tail_bound(radius)
    return value, err


def circulation_flux_2d(A: Callable, R: float, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Circulation of a planar potential over the circle ``|x| = R``."""

    def integrand(theta):
        c, s = np.cos(theta), np.sin(theta)
        pts = np.stack([R * c, R * s], axis=-1)
        a = np.asarray(A(pts))
        return R * (-a[..., 0] * s + a[..., 1] * c)

    return numerics.integrate_circle(integrand, cfg)


# ----------------------------------------------------------------------------
# Plain-text configuration


def _parse_value(raw: str):
    raw = raw.strip()
    if "," in raw:
        return tuple(float(t) for t in raw.split(",") if t.strip())
    try:
        return float(raw)
    except ValueError:
        return raw


def _format_value(value) -> str:
    if isinstance(value, (tuple, list, np.ndarray)):
        return ", ".join(repr(float(v)) for v in np.ravel(value))
    if isinstance(value, (int, float, np.floating)):
        return repr(float(value))
    return str(value)


def parse_field_config(text: str) -> FieldSpec:
    """Parse a ``[field]`` section with ``dimension``, ``family`` and ``param.*`` keys."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed field config: {exc}") from None
    if "field" not in parser:
        raise ConfigError("field config has no [field] section")
    sect = parser["field"]
    if "family" not in sect or "dimension" not in sect:
        raise ConfigError("field config needs 'dimension' and 'family'")
    try:
        dimension = int(sect["dimension"])
    except ValueError:
        raise ConfigError("dimension must be 2 or 3", value=sect["dimension"]) from None
    params = {}
    for key, raw in sect.items():
        if key in ("dimension", "family"):
            continue
        if not key.startswith("param."):
            raise ConfigError(f"unexpected key {key!r} in [field]")
        params[key[len("param."):]] = _parse_value(raw)
    return FieldSpec(dimension, sect["family"].strip(), params)


def load_field_config(path) -> FieldSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_field_config(fh.read())


def dump_field_config(spec: FieldSpec) -> str:
    """Canonical text form; ``parse_field_config`` inverts it exactly."""
    lines = ["[field]", f"dimension = {spec.dimension}", f"family = {spec.family}"]
    for key in sorted(spec.params):
        lines.append(f"param.{key} = {_format_value(spec.params[key])}")
    return "\n".join(lines) + "\n"
