# Point flux and a smooth 2D field: kernels, phases and spectra.
# Run with `python3 notebooks/point_flux_walkthrough.py`.

import math

import numpy as np

from magscatter.amplitude import (
    ab_kernel_closed_form,
    ab_partial_wave_sum,
    essential_spectrum_2d,
    singular_amplitude_2d,
)
from magscatter.circulation import half_plane_flux_f
from magscatter.fields import FieldSpec, total_flux_2d

# %% point flux: partial waves against the closed kernel
alpha = 0.25
d = np.array([0.5, 1.0, 2.0, 3.0])
closed = ab_kernel_closed_form(d, 0.0, alpha)[1]
for M, rho in [(4000, 0.999), (20000, 0.999), (40000, 0.9995)]:
    approx = ab_partial_wave_sum(d, 0.0, alpha, M=M, abel_radius=rho)
    print(f"M={M:6d} rho={rho}: max error {np.abs(approx - closed).max():.2e}")
# the residual tracks rho**M, the truncated tail of the series
print("rho**M at M=4000, rho=0.999:", 0.999 ** 4000)

# %% a field with a dipole moment
spec = FieldSpec.catalog("radial_plus_dipole_2d", alpha=0.25, p=(0.06, 0.08))
flux, err = total_flux_2d(spec)
print("flux", flux, "expected", -0.5 * math.pi)

th = np.linspace(0, 2 * math.pi, 9)[:-1]
f = [half_plane_flux_f(spec, np.array([math.cos(t), math.sin(t)])) for t in th]
print("f(omega) samples", np.round(f, 6))

amp = singular_amplitude_2d(spec)
print("delta coeff", amp.delta_coeff, "pv coeff", amp.pv_coeff)
w, wp = np.array([1.0, 0.0]), np.array([math.cos(0.01), math.sin(0.01)])
print("kernel near the forward direction", amp.kernel(w, wp))

# %% spectrum: two conjugate arcs, or the whole circle for a large moment
sp = essential_spectrum_2d(spec)
print("arcs", sp.arcs, "endpoints", sp.bounds)
print("expected endpoints", -math.pi * 0.25 - 0.2, -math.pi * 0.25 + 0.2)
big = essential_spectrum_2d(FieldSpec.catalog("radial_plus_dipole_2d", alpha=0.25, p=(1.6, 0.0)))
print("large moment -> full circle:", big.full_circle)
