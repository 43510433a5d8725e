"""A scalar field around a static mass as c grows.

1. The Schroedinger limit is a gravitational hydrogen atom: Numerov levels
   against -(G M)^2 m^3 / (2 hbar^2 n^2), with the l-degeneracy.
2. At finite c the stripped Klein-Gordon ground frequency approaches the
   limit like 1/c^2; adding a charge (Reissner-Nordstrom) moves it by an
   amount that also falls like 1/c^2, while its share of the full frequency
   m c^2 falls like 1/c^4.
3. Temperatures and horizon size scale as fixed powers of c, and the two
   orderings of the c -> inf and near-horizon limits disagree.

Run with ``python3 demos/gravitational_atom.py`` (about a second).
"""

from dataclasses import replace

from nclimit.kinematics import PhysicalParams
from nclimit.reporting import fit_power_law
from nclimit.static_modes import (StaticBackground, default_window, hydrogenic_energy, solve_kg_mode_radial,
                                  solve_schrodinger_radial)
from nclimit.thermal_limits import limit_square_report

P = PhysicalParams()
schw = StaticBackground.schwarzschild(P)

print("Schroedinger levels (n, l): numerical / exact - 1")
for l in range(3):
    spec = solve_schrodinger_radial(schw, l, 4 - l, window=default_window(P, 4))
    print("  " + "   ".join(f"({lv.n},{l}) {lv.eigenvalue / hydrogenic_energy(P, lv.n) - 1:+.1e}" for lv in spec.levels))

rn = StaticBackground.reissner_nordstrom(replace(P, Q=0.5))
rows = []
for c in (50.0, 100.0, 200.0, 400.0):
    e_s = solve_kg_mode_radial(schw, c, 0, 1).levels[0].eigenvalue
    e_q = solve_kg_mode_radial(rn, c, 0, 1).levels[0].eigenvalue
    rows.append((c, e_s + 0.5, e_q - e_s))
    print(f"  c = {c:5g}   E_c - E_1 = {e_s + 0.5:+.3e}   E_RN - E_schw = {e_q - e_s:+.3e}")
print(f"  exponents: deviation {fit_power_law([(c, abs(d)) for c, d, _ in rows]).fitted_exponent:.3f}, "
      f"charge shift {fit_power_law([(c, abs(q)) for c, _, q in rows]).fitted_exponent:.3f}, "
      f"charge shift / (m c^2) {fit_power_law([(c, abs(q) / c**2) for c, _, q in rows]).fitted_exponent:.3f}")

rep = limit_square_report(P, [10.0, 100.0, 1000.0, 1e4], epsilon=0.5)
print("\nlimit square with eps = 0.5")
for c, t_u, t_hh, r_s, pn_a, pn_b in rep.rows:
    print(f"  c = {c:6g}   T_U = {t_u:.3e}   T_HH = {t_hh:.3e}   r_s = {r_s:.1e}   "
          f"GM/(r c^2): fixed r {pn_a:.1e}, near horizon {pn_b:.4f}")
print(f"  fixed r parameter falls as c^{rep.order_a_fit.fitted_exponent:.3f}; "
      f"near the horizon it stays {rep.order_b_value:.4f}; T_HH grows as c^{rep.t_hh_growth:.3f}")
