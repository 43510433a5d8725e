"""The Galilean vacuum is not separating for local field operators.

A smeared Schroedinger field operator psi(f) annihilates the vacuum, yet it is
not the zero operator: acting on one-particle states it returns a nonzero
vacuum component. This script prints both numbers for a few test functions,
then shows that each annihilator lowers the particle number by exactly one.

Run with ``python3 demos/vacuum_obstruction.py``.
"""

import math

import numpy as np

from nclimit.fock import (FockVector, OneParticleWavefunction, apply_annihilator, bargmann_charge, fock_nodes, nonseparating_witness)
from nclimit.kinematics import PhysicalParams
from nclimit.smearing import random_gaussian, spatial_gaussian

P = PhysicalParams()
rng = np.random.default_rng(3)

print("psi(f) on the vacuum and on one-particle probes")
for _ in range(4):
    f = random_gaussian(rng)
    w = nonseparating_witness(P, f)
    print(f"  centre {np.round(f.x0, 2)}   ||psi(f)|0>|| = {w.vacuum_norm:g}   certificate = {w.certificate:.4e}")

f = random_gaussian(rng)
nodes = fock_nodes(f, params=P, n_radial=24)
gs = [OneParticleWavefunction.from_test_function(nodes, spatial_gaussian(x0=x, sigma=0.9))
      for x in ((0, 0, 0), (0.5, 0, 0), (0, -0.5, 0.3))]
v = FockVector.created(gs[0]) + FockVector.created(*gs[:2]) + FockVector.created(*gs)
print("\nBargmann sectors (particle number, mass charge) before and after psi(f)")
for label, w in (("v", v), ("psi(f) v", apply_annihilator(P, math.inf, f, v))):
    print(f"  {label:9s}", ", ".join(f"n={s.n} M={s.mass_charge:g} |.|^2={q:.3e}" for s, q in bargmann_charge(w, P)))
