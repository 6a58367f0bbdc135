"""Singular part of the scattering amplitude and essential spectra.

Functions on the unit circle (the coefficient ``a``, gauge asymptotics
``phi0``, amplitude phases) are passed as functions of the polar angle and
must accept arrays.  Points of the sphere are unit 3-vectors.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize, minimize_scalar
from scipy.spatial.transform import Rotation

from . import numerics
from .circulation import arc_integral_f, half_plane_flux_f, line_circulation_I
from .errors import DiagonalEvaluation, NonConvergence, NotOrthogonal
from .fields import FieldSpec, total_flux_2d
from .numerics import DEFAULT_CONFIG, EpsilonSchedule, QuadratureConfig

__all__ = [
    "SpectralSet",
    "SingularAmplitude2D",
    "SingularAmplitude3D",
    "ab_eigenvalue",
    "ab_kernel_closed_form",
    "ab_partial_wave_sum",
    "singular_amplitude_2d",
    "singular_amplitude_2d_from_a",
    "essential_spectrum_2d",
    "circle_parametrization_3d",
    "circle_frame_3d",
    "sample_circulation_3d",
    "p_average_3d",
    "q_kernel_3d",
    "q_kernel_fourier",
    "singular_amplitude_3d",
    "essential_spectrum_3d",
    "fibonacci_sphere",
    "cross_section",
    "forward_cross_section_coefficient",
    "gauge_covariance_transform",
    "pure_gauge_sm",
]

TWO_PI = 2.0 * math.pi


# ----------------------------------------------------------------------------
# Subsets of the unit circle


def _wrap(a):
    return float(np.mod(a, TWO_PI))


@dataclass(frozen=True)
class SpectralSet:
    """Closed subset of the unit circle.

    ``arcs`` holds ``(start, end)`` angles in ``[0, 2pi)``; each arc runs
    counterclockwise from ``start`` to ``end`` (so it may pass through angle
    0), and ``start == end`` is a single point.  ``bounds`` optionally keeps
    the unwrapped phase interval the set was built from.
    """

    arcs: tuple = ()
    full_circle: bool = False
    bounds: Optional[tuple] = None

    @classmethod
    def from_intervals(cls, intervals, tol: float = 1e-12, bounds=None) -> "SpectralSet":
        """Union of the phase intervals ``[lo, hi]`` (unwrapped, ``lo <= hi``)."""
        pieces = []
        for lo, hi in intervals:
            if hi - lo >= TWO_PI - tol:
                return cls((), True, bounds)
            s = _wrap(lo)
            e = s + (hi - lo)
            if e > TWO_PI:
                pieces.append((s, TWO_PI))
                pieces.append((0.0, e - TWO_PI))
            else:
                pieces.append((s, e))
        pieces.sort()
        merged = []
        for s, e in pieces:
            if merged and s <= merged[-1][1] + tol:
                merged[-1][1] = max(merged[-1][1], e)
            else:
                merged.append([s, e])
        if len(merged) > 1 and merged[0][0] <= tol and merged[-1][1] >= TWO_PI - tol:
            first = merged.pop(0)
            merged[-1][1] = first[1] + TWO_PI
        if len(merged) == 1 and merged[0][1] - merged[0][0] >= TWO_PI - tol:
            return cls((), True, bounds)
        arcs = tuple((_wrap(s), _wrap(e)) for s, e in merged)
        return cls(tuple(sorted(arcs)), False, bounds)

    def contains(self, angle, tol: float = 1e-9) -> bool:
        if self.full_circle:
            return True
        a = _wrap(angle)
        for s, e in self.arcs:
            length = _wrap(e - s)
            if _wrap(a - s + tol) <= length + 2 * tol:
                return True
        return False

    def conjugate(self) -> "SpectralSet":
        if self.full_circle:
            return self
        b = None if self.bounds is None else (-self.bounds[1], -self.bounds[0])
        return SpectralSet.from_intervals([(-s - _wrap(e - s), -s) for s, e in self.arcs], bounds=b)

    def to_json(self) -> dict:
        if self.full_circle:
            return {"full_circle": True}
        return {"arcs": [[s, e] for s, e in self.arcs]}


# ----------------------------------------------------------------------------
# Point-flux reference solution


def ab_eigenvalue(m: int, alpha: float) -> complex:
    """Eigenvalue of the point-flux scattering matrix on the ``m``-th harmonic."""
    return complex(np.exp(1j * math.pi * alpha)) if m < -alpha else complex(np.exp(-1j * math.pi * alpha))


def ab_kernel_closed_form(theta, theta_p, alpha: float):
    """``(delta_coeff, offdiag)`` of the point-flux scattering matrix kernel."""
    delta = math.cos(math.pi * alpha)
    d = np.asarray(theta, dtype=float) - np.asarray(theta_p, dtype=float)
    if np.any(np.abs(np.mod(d + math.pi, TWO_PI) - math.pi) < 1e-15):
        raise DiagonalEvaluation("the off-diagonal kernel is singular at theta = theta'")
    off = 1j / math.pi * np.exp(-1j * math.floor(alpha) * d) * math.sin(math.pi * alpha) / (np.exp(1j * d) - 1.0)
    return delta, (complex(off) if np.ndim(off) == 0 else off)


def ab_partial_wave_sum(theta, theta_p, alpha: float, M: int = 4000, abel_radius: float = 0.999):
    """Abel-summed truncated harmonic series ``(2pi)^-1 sum s_m rho^|m| e^{im(theta - theta')}``."""
    if M < 1 or not 0 < abel_radius < 1:
        raise ValueError("need M >= 1 and 0 < abel_radius < 1")
    m = np.arange(-M, M + 1)
    s = np.where(m < -alpha, np.exp(1j * math.pi * alpha), np.exp(-1j * math.pi * alpha))
    w = s * abel_radius ** np.abs(m)
    d = np.asarray(theta, dtype=float) - np.asarray(theta_p, dtype=float)
    out = np.exp(1j * np.multiply.outer(d, m)) @ w / TWO_PI
    return complex(out) if np.ndim(out) == 0 else out


# ----------------------------------------------------------------------------
# Two dimensions


def _angle_of(omega):
    w = np.asarray(omega, dtype=float)
    return np.arctan2(w[..., 1], w[..., 0])


@dataclass(frozen=True)
class SingularAmplitude2D:
    """Delta coefficient, principal-value coefficient and phase of the 2D singular amplitude.

    ``phase`` maps polar angles to ``(f(omega_minus) - f(omega_plus))/2``.
    """

    phase: Callable
    delta_coeff: float
    pv_coeff: float
    flux: float
    remainder_exponent: float = 3.0

    def kernel(self, omega, omega_p):
        """Off-diagonal singular kernel ``e^{i phase} pv sgn(det[w, w']) / |w - w'|``."""
        w = np.asarray(omega, dtype=float)
        wp = np.asarray(omega_p, dtype=float)
        det = w[..., 0] * wp[..., 1] - w[..., 1] * wp[..., 0]
        if np.any(np.abs(det) < 1e-15):
            raise DiagonalEvaluation("omega and omega' are collinear")
        dist = np.linalg.norm(w - wp, axis=-1)
        val = np.exp(1j * np.asarray(self.phase(_angle_of(w)))) * self.pv_coeff * np.sign(det) / dist
        return complex(val) if np.ndim(val) == 0 else val


def _phase_from_f(f: Callable) -> Callable:
    """``theta -> (f(theta - pi/2) - f(theta + pi/2))/2`` for a scalar ``f`` of the angle."""

    def phase(theta):
        th = np.asarray(theta, dtype=float)
        flat = th.ravel()
        out = np.array([0.5 * (f(t - 0.5 * math.pi) - f(t + 0.5 * math.pi)) for t in flat])
        return float(out[0]) if th.ndim == 0 else out.reshape(th.shape)

    return phase


def _unit(theta):
    return np.array([math.cos(theta), math.sin(theta)])


def _amplitude(flux, phase, r0):
    return SingularAmplitude2D(
        phase=phase,
        delta_coeff=math.cos(0.5 * flux),
        pv_coeff=math.sin(0.5 * flux) / math.pi,
        flux=flux,
        remainder_exponent=r0,
    )


def singular_amplitude_2d(spec: FieldSpec, cfg: QuadratureConfig = DEFAULT_CONFIG) -> SingularAmplitude2D:
    """Singular amplitude of the transversal gauge for a 2D field."""
    from .gauge import _check_decay

    if spec.dimension != 2:
        raise ValueError("expected a 2D field")
    _check_decay(spec)
    flux, _ = total_flux_2d(spec, cfg)
    r0 = min(spec.decay_exponent, 3.0)
    if spec.analytic_only:
        return _amplitude(flux, lambda th: np.zeros_like(np.asarray(th, dtype=float)) + 0.0, r0)
    phase = _phase_from_f(lambda t: half_plane_flux_f(spec, _unit(t), cfg))
    return _amplitude(flux, phase, r0)


def singular_amplitude_2d_from_a(a_func: Callable, cfg: QuadratureConfig = DEFAULT_CONFIG,
                                 remainder_exponent: float = 3.0) -> SingularAmplitude2D:
    """Singular amplitude built from the angular coefficient ``a`` of the homogeneous part."""
    flux, _ = numerics.integrate_1d(a_func, 0.0, TWO_PI, cfg)
    phase = _phase_from_f(lambda t: arc_integral_f(a_func, _unit(t), cfg))
    return _amplitude(float(flux), phase, remainder_exponent)


def essential_spectrum_2d(spec: FieldSpec, n_samples: int = 128, cfg: QuadratureConfig = DEFAULT_CONFIG,
                          f: Optional[Callable] = None) -> SpectralSet:
    """Arcs ``[gamma_-, gamma_+]`` and their conjugate, from the range of ``f``.

    ``f`` is sampled at ``n_samples`` angles and its extrema are then refined
    by bounded scalar minimization around the best samples.  A custom ``f``
    (function of the angle) overrides the half-plane flux of ``spec``.
    """
    if f is None:
        if spec.dimension != 2:
            raise ValueError("expected a 2D field")
        f = lambda t: half_plane_flux_f(spec, _unit(t), cfg)
    theta = TWO_PI * np.arange(n_samples) / n_samples
    vals = np.array([f(t) for t in theta])
    step = TWO_PI / n_samples
    ext = []
    for sign in (1.0, -1.0):
        i = int(np.argmax(sign * vals))
        res = minimize_scalar(
            lambda t: -sign * f(t), bounds=(theta[i] - step, theta[i] + step),
            method="bounded", options={"xatol": 1e-10},
        )
        best = max(sign * vals[i], -res.fun)
        ext.append(float(sign * best))
    g_plus, g_minus = ext
    bounds = (g_minus, g_plus)
    if g_plus - g_minus >= TWO_PI:
        return SpectralSet((), True, bounds)
    return SpectralSet.from_intervals([(g_minus, g_plus), (-g_plus, -g_minus)], bounds=bounds)


# ----------------------------------------------------------------------------
# Three dimensions


def circle_frame_3d(omega):
    """Orthonormal ``(e1, e2)`` spanning the plane orthogonal to ``omega``."""
    w = np.asarray(omega, dtype=float)
    n2 = w[0] ** 2 + w[1] ** 2
    if n2 > 1e-6:
        n = math.sqrt(n2)
        e1 = np.array([-w[1], w[0], 0.0]) / n
        e2 = np.array([-w[0] * w[2], -w[1] * w[2], n2]) / n
    else:
        e1 = np.array([1.0, 0.0, 0.0])
        e2 = np.cross(w, e1)
        e2 /= np.linalg.norm(e2)
        e1 = np.cross(e2, w)
    return e1, e2


def circle_parametrization_3d(omega, theta):
    """Point ``cos(theta) e1 + sin(theta) e2`` of the great circle orthogonal to ``omega``."""
    e1, e2 = circle_frame_3d(omega)
    th = np.asarray(theta, dtype=float)
    return np.cos(th)[..., None] * e1 + np.sin(th)[..., None] * e2


def _check_unit(omega):
    w = np.asarray(omega, dtype=float)
    if w.shape != (3,) or abs(np.linalg.norm(w) - 1) > 1e-9:
        raise ValueError("omega must be a unit 3-vector")
    return w


def sample_circulation_3d(a_inf: Callable, omega, n: int, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """``I(x(theta_k), omega)`` at ``theta_k = 2 pi k/n``."""
    w = _check_unit(omega)
    theta = TWO_PI * np.arange(n) / n
    return theta, np.atleast_1d(line_circulation_I(a_inf, circle_parametrization_3d(w, theta), w, cfg))


class _CircleData:
    """Converged samples of ``exp(i I)`` on the circle orthogonal to ``omega``.

    Samples are doubled until the discrete Fourier coefficients in the upper
    half of the spectrum fall below ``tol``; the trigonometric interpolant of
    the samples then represents ``exp(iI)`` to that accuracy.
    """

    def __init__(self, a_inf, omega, cfg, n_start=32, n_max=2048, tol=1e-10):
        self.omega = _check_unit(omega)
        n = n_start
        theta, I = sample_circulation_3d(a_inf, self.omega, n, cfg)
        while True:
            c = np.fft.fft(np.exp(1j * I)) / n
            k = np.fft.fftfreq(n, 1.0 / n)
            tail = np.abs(c[np.abs(k) >= n // 4]).max()
            if tail <= tol:
                break
            if 2 * n > n_max:
                raise NonConvergence("circulation samples do not resolve exp(iI)", omega=self.omega.tolist(), tail=float(tail))
            mid = theta + math.pi / n
            I_mid = np.atleast_1d(
                line_circulation_I(a_inf, circle_parametrization_3d(self.omega, mid), self.omega, cfg)
            )
            I = np.column_stack([I, I_mid]).ravel()
            n *= 2
            theta = TWO_PI * np.arange(n) / n
        self.theta = theta
        self.I = I
        self.coeffs = c
        self.freqs = k
        self.p_av = complex(c[0])

    def numerator(self, t):
        """Trigonometric interpolant of ``exp(iI) - p_av``; its mean is exactly zero."""
        t = np.asarray(t, dtype=float)
        nz = self.freqs != 0
        return np.exp(1j * np.multiply.outer(t, self.freqs[nz])) @ self.coeffs[nz]


def p_average_3d(a_inf: Callable, omega, cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """Average of ``exp(i I(psi, omega))`` over the great circle orthogonal to ``omega``."""
    return _CircleData(a_inf, omega, cfg).p_av


def _tangent_angle(omega, tau):
    w = _check_unit(omega)
    t = np.asarray(tau, dtype=float)
    if np.linalg.norm(t) == 0:
        raise ValueError("tau must be nonzero")
    e1, e2 = circle_frame_3d(w)
    return math.atan2(t @ e2, t @ e1), math.hypot(t @ e1, t @ e2), e1, e2


def _q_from_data(data: _CircleData, tau, sched, cfg):
    _, size, e1, e2 = _tangent_angle(data.omega, tau)
    if size == 0:
        raise DiagonalEvaluation("tau has no component orthogonal to omega")
    a, b = float(np.asarray(tau) @ e1), float(np.asarray(tau) @ e2)
    val, _ = numerics.regularized_i0_pairing(
        data.numerator, lambda t: a * np.cos(t) + b * np.sin(t), 2, sched, cfg
    )
    return -val / TWO_PI ** 2


def q_kernel_3d(a_inf: Callable, omega, tau, sched: EpsilonSchedule = EpsilonSchedule(),
                cfg: QuadratureConfig = DEFAULT_CONFIG) -> complex:
    """``-(2pi)^-2 int (exp(iI) - p_av) (<psi, tau> - i0)^-2 dpsi`` over the circle orthogonal to ``omega``."""
    w = _check_unit(omega)
    t = np.asarray(tau, dtype=float)
    if abs(w @ t) > 1e-8 * max(1.0, np.linalg.norm(t)):
        raise NotOrthogonal("tau must be orthogonal to omega", inner=float(w @ t))
    return _q_from_data(_CircleData(a_inf, w, cfg), t, sched, cfg)


def q_kernel_fourier(coeffs: dict, omega, tau) -> complex:
    """Closed-form pairing for a numerator given by Fourier coefficients in the circle angle.

    Uses ``int e^{in t} (cos t - i0)^-2 dt = -2 pi |n| (-i)^|n|`` after
    rotating the angle so that ``<x(t), tau> = |tau_perp| cos(t - t_tau)``.
    """
    angle, size, _, _ = _tangent_angle(omega, tau)
    total = 0j
    for n, c in coeffs.items():
        if n == 0:
            continue
        total += c * np.exp(1j * n * angle) * (-TWO_PI * abs(n) * (-1j) ** abs(n))
    return complex(-total / size ** 2 / TWO_PI ** 2)


@dataclass
class SingularAmplitude3D:
    """Averaged delta coefficient ``p_av`` and principal-value kernel ``q`` in 3D.

    Circle samples are cached per ``omega``.
    """

    a_inf: Callable
    cfg: QuadratureConfig = DEFAULT_CONFIG
    sched: EpsilonSchedule = field(default_factory=EpsilonSchedule)
    remainder_exponent: float = 2.0
    _cache: dict = field(default_factory=dict, repr=False)

    def data(self, omega) -> _CircleData:
        w = _check_unit(omega)
        key = tuple(np.round(w, 15))
        if key not in self._cache:
            self._cache[key] = _CircleData(self.a_inf, w, self.cfg)
        return self._cache[key]

    def p_av(self, omega) -> complex:
        return self.data(omega).p_av

    def q_kernel(self, omega, tau) -> complex:
        w = _check_unit(omega)
        t = np.asarray(tau, dtype=float)
        if abs(w @ t) > 1e-8 * max(1.0, np.linalg.norm(t)):
            raise NotOrthogonal("tau must be orthogonal to omega", inner=float(w @ t))
        return _q_from_data(self.data(w), t, self.sched, self.cfg)

    def kernel(self, omega, omega_p) -> complex:
        """``q(omega, omega' - omega)``; only the part of ``omega' - omega`` orthogonal to ``omega`` enters."""
        w = _check_unit(omega)
        wp = _check_unit(omega_p)
        if np.allclose(w, wp, atol=1e-15):
            raise DiagonalEvaluation("the kernel is singular on the diagonal")
        tau = wp - w
        return _q_from_data(self.data(w), tau - (tau @ w) * w, self.sched, self.cfg)

    def numerator_mean(self, omega, n: int = 4096) -> complex:
        """Average of the interpolated numerator ``exp(iI) - p_av`` on a fine grid."""
        t = TWO_PI * np.arange(n) / n
        return complex(np.mean(self.data(omega).numerator(t)))


def singular_amplitude_3d(a_inf: Callable, cfg: QuadratureConfig = DEFAULT_CONFIG,
                          sched: Optional[EpsilonSchedule] = None) -> SingularAmplitude3D:
    return SingularAmplitude3D(a_inf, cfg, sched or EpsilonSchedule())


def fibonacci_sphere(n: int) -> np.ndarray:
    """``n`` near-uniform points on the unit sphere (golden-angle spiral)."""
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    phi = math.pi * (3.0 - math.sqrt(5.0)) * k
    r = np.sqrt(1.0 - z * z)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)


def _pair_from_rotation(R):
    m = R.as_matrix()
    return m[:, 0], m[:, 2]


def essential_spectrum_3d(a_inf: Callable, grid_size: int = 32, cfg: QuadratureConfig = DEFAULT_CONFIG,
                          n_theta: int = 64, refine: bool = True) -> SpectralSet:
    """Closure of ``{exp(i I(psi, omega))}`` over orthonormal pairs ``(psi, omega)``.

    The pairs form a connected set (a copy of SO(3)) and ``I`` is continuous
    there, so the image of ``I`` is the interval between its extrema.  They
    are located on a ``grid_size`` x ``n_theta`` grid and then polished by a
    Nelder-Mead search over rotations ``(psi, omega x psi, omega)``.
    """
    omegas = fibonacci_sphere(grid_size)
    with ThreadPoolExecutor(max_workers=numerics.max_workers()) as pool:
        rows = list(pool.map(lambda w: sample_circulation_3d(a_inf, w, n_theta, cfg)[1], omegas))
    vals = np.array(rows)
    theta = TWO_PI * np.arange(n_theta) / n_theta
    ext = []
    for sign in (1.0, -1.0):
        i, k = np.unravel_index(int(np.argmax(sign * vals)), vals.shape)
        best = sign * vals[i, k]
        if refine:
            w = omegas[i]
            x = circle_parametrization_3d(w, theta[k])
            R0 = Rotation.from_matrix(np.column_stack([x, np.cross(w, x), w]))

            def objective(d, R0=R0, sign=sign):
                psi, om = _pair_from_rotation(R0 * Rotation.from_rotvec(d))
                return -sign * line_circulation_I(a_inf, psi, om, cfg)

            res = minimize(objective, np.zeros(3), method="Nelder-Mead",
                           options={"xatol": 1e-9, "fatol": 1e-13, "initial_simplex": 0.05 * np.vstack([np.zeros(3), np.eye(3)])})
            best = max(best, -res.fun)
        ext.append(float(sign * best))
    hi, lo = ext
    return SpectralSet.from_intervals([(lo, hi)], bounds=(lo, hi))


# ----------------------------------------------------------------------------
# Cross sections and gauge covariance


def cross_section(s_value: complex, lam: float, d: int) -> float:
    """``(2pi)^{d-1} lambda^{-(d-1)/2} |s|^2``."""
    if not lam > 0:
        raise ValueError("energy must be positive")
    if d not in (2, 3):
        raise ValueError("dimension must be 2 or 3")
    return float(TWO_PI ** (d - 1) * lam ** (-(d - 1) / 2) * abs(s_value) ** 2)


def forward_cross_section_coefficient(flux: float, lam: float) -> float:
    """Coefficient of ``|omega - omega'|^-2`` in the 2D cross section near the forward direction."""
    return 2.0 / math.pi * lam ** -0.5 * math.sin(0.5 * flux) ** 2


def gauge_covariance_transform(amp: SingularAmplitude2D, phi0: Callable) -> SingularAmplitude2D:
    """Amplitude after a gauge change with asymptotics ``phi0``: only the phase moves."""
    old = amp.phase

    def phase(theta):
        th = np.asarray(theta, dtype=float)
        return np.asarray(old(th)) + np.asarray(phi0(th)) - np.asarray(phi0(th + math.pi))

    return SingularAmplitude2D(phase, amp.delta_coeff, amp.pv_coeff, amp.flux, amp.remainder_exponent)


def pure_gauge_sm(phi0: Callable, omega) -> complex:
    """Scattering matrix multiplier ``exp(i phi0(omega) - i phi0(-omega))`` for a vanishing field."""
    th = float(_angle_of(omega))
    return complex(np.exp(1j * (float(phi0(th)) - float(phi0(th + math.pi)))))
