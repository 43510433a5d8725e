"""Walk through the flat-space c -> inf limit.

1. The stripped Klein-Gordon frequency approaches hbar k^2/2m, with a
   residual that shrinks like 1/c^2.
2. Smeared two-point functions of the relativistic field approach their
   Schroedinger counterparts at the same rate.
3. The equal-time commutator of unit-norm test functions tends to 1.

Run with ``python3 demos/flat_space_limit.py``.
"""

import math

from nclimit.flat_limit import ccr_deficit, wightman_difference, wightman_flat
from nclimit.kinematics import Dispersion, PhysicalParams, omega_stripped
from nclimit.reporting import fit_power_law
from nclimit.smearing import spacetime_gaussian, spatial_gaussian

P = PhysicalParams()
SWEEP = [10.0, 30.0, 100.0, 300.0, 1000.0]

print("stripped dispersion at k = 1 (the limit is 0.5)")
for c in SWEEP:
    w = float(omega_stripped(Dispersion(P, c), 1.0))
    print(f"  c = {c:7g}   omega - m c^2 = {w:.12f}   gap * c^2 = {(0.5 - w) * c**2:.6f}")

f = spacetime_gaussian(sigma_t=0.8, sigma_x=1.1, omega0=0.2, k0=(0.3, 0.0, 0.0))
g = spacetime_gaussian(t0=0.5, x0=(0.7, 0.0, -0.4), sigma_t=1.2, sigma_x=0.9)
print(f"\nlimiting smeared two-point function W(f, g) = {wightman_flat(P, math.inf, f, g).value:.10f}")
pts = [(c, abs(wightman_difference(P, c, f, g))) for c in SWEEP]
for c, d in pts:
    print(f"  c = {c:7g}   |W_c - W_inf| = {d:.3e}")
print(f"  fitted exponent {fit_power_law(pts).fitted_exponent:.4f}")

h = spatial_gaussian(sigma=1.3, normalize=True)
pts = [(c, ccr_deficit(P, c, h)) for c in SWEEP]
print("\nequal-time commutator deficit 1 - [psi(h), psi(h)^+]")
for c, d in pts:
    print(f"  c = {c:7g}   deficit = {d:.3e}   deficit * c^2 = {d * c**2:.6f}")
print(f"  leading coefficient 3/(4 sigma^2) = {3 / (4 * 1.3**2):.6f}")
