# Toroidal solenoid: section flux, the gauge scalar U and the 3D kernels.
# Run with `python3 notebooks/solenoid_walkthrough.py`.

import math

import numpy as np

from magscatter.amplitude import circle_frame_3d, fibonacci_sphere, singular_amplitude_3d
from magscatter.gauge import decompose_potential, modified_ab_potential_3d
from magscatter.solenoid import (
    SolenoidGeometry,
    torus_flux_disc_closed_form,
    torus_flux_section,
    torus_q,
    torus_spectrum,
    torus_u,
)

geom = SolenoidGeometry.disc(2.0, 1.0, 1.0)

# %% section flux against U0
rep = torus_flux_section(geom)
print("Phi_s (quadrature)", rep.phi_quadrature)
print("Phi_s (disc formula)", torus_flux_disc_closed_form(2.0, 1.0, 1.0))
print("U0", rep.U0, "Phi_s + U0", rep.defect)

# %% u depends on the polar component only; q is monotone between -U0 and U0
z = np.linspace(-2, 2, 9)
print("q(z)", np.round(torus_q(z, geom), 6))
for w3 in (-0.9, 0.0, 0.9):
    n = math.sqrt(1 - w3 * w3)
    ws = np.array([[n * math.cos(p), n * math.sin(p), w3] for p in (0.0, 2.0, 4.0)])
    print("w3", w3, "u", np.round(torus_u(ws, geom), 10))

print("spectrum", torus_spectrum(rep.phi_quadrature).to_json())

# %% no principal-value kernel for the solenoid, one for a lifted point flux
solenoid = singular_amplitude_3d(decompose_potential(geom.field_spec()).a_inf)
lifted = singular_amplitude_3d(modified_ab_potential_3d(0.5))
for w in fibonacci_sphere(4):
    tau = circle_frame_3d(w)[0]
    print(np.round(w, 3), "q solenoid", abs(solenoid.q_kernel(w, tau)), "q lifted", abs(lifted.q_kernel(w, tau)))
