"""
Verification suites behind the command-line subcommands.

Each ``run_*`` function takes a :class:`SuiteContext` and returns a
:class:`SuiteResult`: CSV-ready tables, a JSON payload, verdicts judged
against the tolerance manifest and the plots worth drawing. Nothing here
touches the filesystem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import contraction as ct
from .fock import (FockVector, OneParticleWavefunction, annihilate, apply_annihilator, convergence_vector_norm,
                   field_wavefunction, fock_nodes, fock_norm, nonseparating_witness)
from .flat_limit import ccr_deficit, equal_time_ccr, wightman_difference, wightman_flat
from .heat_hadamard import DEFAULT_DELTA, diagonal_kernel, fit_hadamard
from .kinematics import Dispersion, PhysicalParams, default_c_sweep, geometric_sweep
from .oracles import dense_annihilate, dense_fock_state, eight_point_nodes
from .reporting import Verdict, fit_power_law, judge, load_tolerances
from .smearing import MomentumGrid, random_gaussian
from .static_modes import (StaticBackground, default_window, hydrogenic_energy, solve_kg_mode_radial,
                           solve_schrodinger_radial)
from .thermal_limits import limit_square_report, scaling_table, schwarzschild_radius

__all__ = ["Column", "Table", "PlotSpec", "SuiteContext", "SuiteResult", "SUITES", "run_suite"]

MODE_C = (50.0, 100.0, 200.0, 400.0)
RN_DEFAULT_Q = 0.5


@dataclass(frozen=True)
class Column:
    key: str
    unit: str
    meaning: str = ""

    @property
    def header(self) -> str:
        h = f"{self.key} [{self.unit}]"
        return f"{h} {self.meaning}" if self.meaning else h


@dataclass
class Table:
    name: str
    columns: tuple
    rows: list = field(default_factory=list)

    def keys(self) -> list:
        return [c.key for c in self.columns]


@dataclass(frozen=True)
class PlotSpec:
    table: str
    x: str
    y: tuple
    group: str | None = None
    loglog: bool = True
    fit: bool = True
    title: str = ""


@dataclass
class SuiteContext:
    params: PhysicalParams = field(default_factory=PhysicalParams)
    c_values: tuple | None = None  # None: the suite's own default sweep
    quick: bool = False
    manifest: dict = field(default_factory=load_tolerances)
    seed: int = 20240611
    options: dict = field(default_factory=dict)

    def sweep(self, default) -> np.ndarray:
        if self.c_values is not None:
            cs = np.asarray(sorted(float(c) for c in self.c_values))
        else:
            cs = np.asarray(default, dtype=float)
            if self.quick and cs.size > 4:
                cs = geometric_sweep(cs[0], cs[-1], max(4, cs.size // 2))
        if cs.size == 0:
            raise ValueError("empty c sweep")
        return cs

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def judge(self, claim, measured, **kw) -> Verdict:
        return judge(claim, measured, self.manifest, quick=self.quick, **kw)


@dataclass
class SuiteResult:
    name: str
    tables: list = field(default_factory=list)
    payload: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)
    plots: list = field(default_factory=list)
    texts: dict = field(default_factory=dict)  # extra plain-text artifacts: filename -> content

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)


C_COL = Column("c", "speed")


def run_dispersion(ctx: SuiteContext) -> SuiteResult:
    p, k = ctx.params, 1.0
    tab = Table("dispersion", (C_COL,
                               Column("omega_stripped", "1/time", "omega - m c^2/hbar at k=1"),
                               Column("residual", "1/time", "hbar k^2/(2m) - omega_stripped"),
                               Column("bound", "1/time", "hbar^3 k^4/(8 m^3 c^2)"),
                               Column("envelope_gap", "1", "|residual/bound - 1|")))
    for c in ctx.sweep(default_c_sweep()):
        d = Dispersion(p, c)
        res, bd = float(d.kinetic_residual(k)), float(d.residual_bound(k))
        tab.rows.append([float(c), float(d.omega_stripped(k)), res, bd, abs(res / bd - 1.0)])
    fit = fit_power_law([(r[0], r[2]) for r in tab.rows])
    gap = max(r[4] for r in tab.rows)
    return SuiteResult("dispersion", [tab], {"k": k, "fit": fit.to_dict(), "max_envelope_gap": gap},
                       [ctx.judge("dispersion.exponent", fit.fitted_exponent, report=fit),
                        ctx.judge("dispersion.envelope", gap)],
                       [PlotSpec("dispersion", "c", ("residual", "bound"), title="stripped dispersion residual")])


def run_flat_wightman(ctx: SuiteContext) -> SuiteResult:
    p, rng = ctx.params, ctx.rng()
    cs = ctx.sweep(default_c_sweep())
    n_pairs, n_points = (3, 128) if ctx.quick else (5, 256)
    tab = Table("flat_wightman", (Column("pair", "index"), C_COL,
                                  Column("re", "1", "Re W_c(f;g) - W_inf(f;g)"),
                                  Column("im", "1", "Im W_c(f;g) - W_inf(f;g)"),
                                  Column("abs_diff", "1", "|W_c - W_inf|"),
                                  Column("quad_err", "1", "quadrature error of W_c")))
    verdicts, pairs = [], []
    for i in range(n_pairs):
        f, g = random_gaussian(rng), random_gaussian(rng)
        grid = MomentumGrid.for_functions(f, g, params=p, n_points=n_points)
        samples = []
        for c in cs:
            d = wightman_difference(p, c, f, g, grid=grid)
            q = wightman_flat(p, c, f, g, grid=grid).quadrature_error
            tab.rows.append([i, float(c), d.real, d.imag, abs(d), q])
            samples.append((float(c), abs(d)))
        fit = fit_power_law(samples)
        pairs.append({"f": f.to_dict(), "g": g.to_dict(), "fit": fit.to_dict()})
        verdicts.append(ctx.judge("flat_wightman.exponent", fit.fitted_exponent, report=fit, detail=f"pair {i}"))
    return SuiteResult("flat-wightman", [tab], {"pairs": pairs, "n_points": n_points}, verdicts,
                       [PlotSpec("flat_wightman", "c", ("abs_diff",), group="pair", title="|W_c - W_inf|")])


def run_ccr(ctx: SuiteContext) -> SuiteResult:
    p, rng = ctx.params, ctx.rng()
    cs = ctx.sweep(default_c_sweep())
    g = random_gaussian(rng, "spatial").normalized()
    shift = 12.0 * g.sigma_x
    far = replace(g, x0=(g.x0[0] + shift, g.x0[1], g.x0[2]))
    n_points = 128 if ctx.quick else 256
    grid = MomentumGrid.for_functions(g, far, params=p, n_points=n_points)
    tab = Table("ccr", (C_COL, Column("deficit", "1", "<g;g> - [psi(g);psi(g)^+]_c"),
                        Column("disjoint", "1", "|[psi(g);psi(g')^+]_c| for separated g'")))
    for c in cs:
        tab.rows.append([float(c), ccr_deficit(p, c, g, grid=grid), abs(equal_time_ccr(p, c, g, far, grid=grid).value)])
    fit = fit_power_law([(r[0], r[1]) for r in tab.rows])
    worst = max(r[2] for r in tab.rows)
    return SuiteResult("ccr", [tab], {"g": g.to_dict(), "separation": shift, "fit": fit.to_dict(),
                                      "max_disjoint": worst},
                       [ctx.judge("ccr.exponent", fit.fitted_exponent, report=fit),
                        ctx.judge("ccr.disjoint", worst)],
                       [PlotSpec("ccr", "c", ("deficit",), title="equal-time commutator deficit")])


def _oracle_gap(ctx: SuiteContext, f, c) -> float:
    """Largest componentwise gap between the Wick-rule and dense-tensor ``a(F)v``."""
    rng = np.random.default_rng(ctx.seed + 1)
    nodes = eight_point_nodes()
    F = field_wavefunction(ctx.params, c, f, nodes) - field_wavefunction(ctx.params, math.inf, f, nodes)
    gs = [OneParticleWavefunction(nodes, rng.normal(size=8) + 1j * rng.normal(size=8)) for _ in range(3)]
    gap = 0.0
    for n in (1, 2, 3):
        v = FockVector.created(*gs[:n], coef=complex(*rng.normal(size=2))) + FockVector.created(*gs[3 - n:])
        fast = dense_fock_state(annihilate(F, v))
        slow = dense_annihilate(F, dense_fock_state(v), nodes.weights)
        gap = max(gap, float(np.max(np.abs(fast[n - 1] - slow[n - 1]))))
    return gap


def run_fock_converge(ctx: SuiteContext) -> SuiteResult:
    p, rng = ctx.params, ctx.rng()
    cs = ctx.sweep(default_c_sweep())
    f = random_gaussian(rng)
    gs = [random_gaussian(rng, "spatial") for _ in range(3)]
    nodes = fock_nodes(f, *gs, params=p, n_radial=24 if ctx.quick else 48)
    ws = [OneParticleWavefunction.from_test_function(nodes, g) for g in gs]
    tab = Table("fock_converge", (Column("n", "particles"), C_COL,
                                  Column("norm", "1", "||(psi_c(f) - psi_inf(f)) v||")))
    verdicts, fits = [], {}
    for n in (1, 2, 3):
        v = FockVector.created(*ws[:n])
        samples = [(float(c), convergence_vector_norm(p, c, f, v)) for c in cs]
        tab.rows.extend([n, c, e] for c, e in samples)
        fit = fit_power_law(samples)
        fits[str(n)] = fit.to_dict()
        verdicts.append(ctx.judge("fock.exponent", fit.fitted_exponent, report=fit, detail=f"n = {n}"))
    gap = _oracle_gap(ctx, f, float(cs[0]))
    verdicts.append(ctx.judge("fock.oracle", gap, detail="8-point grid; n <= 3"))
    return SuiteResult("fock-converge", [tab], {"f": f.to_dict(), "fits": fits, "oracle_gap": gap,
                                                "nodes": nodes.size}, verdicts,
                       [PlotSpec("fock_converge", "c", ("norm",), group="n", title="Fock strong convergence")])


def _grading_violations(params, f, nodes, ws) -> int:
    v = FockVector.vacuum(nodes)
    for n in range(1, len(ws) + 1):
        v = v + FockVector.created(*ws[:n])
    bad = 0
    for n in v.particle_numbers():
        out = apply_annihilator(params, math.inf, f, v.sector(n))
        want = [] if n == 0 else [n - 1]
        bad += out.particle_numbers() != want
    whole = apply_annihilator(params, math.inf, f, v).particle_numbers()
    bad += whole != [n - 1 for n in v.particle_numbers() if n > 0]
    return int(bad)


def run_witness(ctx: SuiteContext) -> SuiteResult:
    p, rng = ctx.params, ctx.rng()
    tab = Table("witness", (Column("trial", "index"), Column("vacuum_norm", "1", "||psi(f)|0>||"),
                            Column("certificate", "1", "max_g ||psi(f) a^+(g)|0>|| / ||g||"),
                            Column("grading_violations", "count")))
    records = []
    for i in range(10):
        f = random_gaussian(rng)
        probes = [random_gaussian(rng, "spatial") for _ in range(2)]
        nodes = fock_nodes(f, *probes, params=p, n_radial=16 if ctx.quick else 24)
        rec = nonseparating_witness(p, f, probes=probes, nodes=nodes)
        ws = [OneParticleWavefunction.from_test_function(nodes, g) for g in probes + probes[:1]]
        bad = _grading_violations(p, f, nodes, ws)
        tab.rows.append([i, rec.vacuum_norm, rec.certificate, bad])
        records.append(rec.to_dict())
    return SuiteResult("witness", [tab], {"records": records},
                       [ctx.judge("witness.vacuum_norm", max(r[1] for r in tab.rows)),
                        ctx.judge("witness.certificate", min(r[2] for r in tab.rows)),
                        ctx.judge("witness.grading", sum(r[3] for r in tab.rows))])


def run_contract(ctx: SuiteContext) -> SuiteResult:
    p = ctx.params
    algebras = {"poincare": ct.poincare_algebra(), "poincare_rest_shifted": ct.poincare_algebra(rest_shifted=True)}
    algebras["galilei"] = ct.contract_algebra(algebras["poincare"])
    algebras["bargmann"] = ct.contract_algebra(algebras["poincare_rest_shifted"])
    anti = {k: [list(x) for x in a.antisymmetry_defects()] for k, a in algebras.items()}
    jac = {k: [list(x) for x in a.jacobi_defects()] for k, a in algebras.items()}
    kp = {k: [{lab: str(v) for lab, v in algebras[k].bracket(f"K{i}", f"P{i}").items()} for i in ct.SPATIAL]
          for k in ("galilei", "bargmann")}
    central_bad = sum(x != {"M": "1"} for x in kp["bargmann"]) + sum(x != {} for x in kp["galilei"])
    listing = "\n\n".join(f"# {k}\n{a.listing()}" for k, a in algebras.items()) + "\n"

    grid = ct.MomentumLine(12.0, 65 if ctx.quick else 97)
    c_h = float(ctx.options.get("c_grid", 10.0))
    halv = ct.h_halving_ratios(p, c_h, grid, levels=3)
    gtab = Table("contract_grid", (Column("level", "index"), Column("h", "1/length", "grid step"),
                                   Column("KP", "1", "rel. residual of [K;P] = (i hbar/c^2) H"),
                                   Column("KH", "1", "rel. residual of [K;H] = i hbar P")))
    h = grid.h
    for i, r in enumerate(halv["residuals"]):
        gtab.rows.append([i, h, r["KP"], r["KH"]])
        h /= 2
    ratios = [x for key in ("KP", "KH") for x in halv["ratios"][key]]
    worst = max(ratios, key=lambda x: abs(x - 4.0))

    cs = ctx.sweep(default_c_sweep())
    v = ct.gaussian_packet(grid)
    cfit = ct.central_charge_limit(p, cs, grid, v)
    ctab = Table("contract_central", (C_COL, Column("defect", "mass", "||(H/c^2 - m) v||")),
                 [[c, e] for c, e in cfit.samples])
    verdicts = [ctx.judge("contraction.antisymmetry", sum(len(x) for x in anti.values())),
                ctx.judge("contraction.jacobi", sum(len(x) for x in jac.values())),
                ctx.judge("contraction.central_extension", central_bad, detail=f"contracted [K_i,P_i]: {kp}"),
                ctx.judge("contraction.h_ratio", worst, detail=f"all ratios {ratios}"),
                ctx.judge("contraction.central_exponent", cfit.fitted_exponent, report=cfit)]
    payload = {"antisymmetry_defects": anti, "jacobi_defects": jac, "contracted_KP": kp,
               "h_ratios": halv["ratios"], "c_grid": c_h, "central_fit": cfit.to_dict()}
    return SuiteResult("contract", [gtab, ctab], payload, verdicts,
                       [PlotSpec("contract_grid", "h", ("KP", "KH"), title="commutator residual vs h"),
                        PlotSpec("contract_central", "c", ("defect",), title="central charge defect")],
                       {"contract_brackets.txt": listing})


def _background(kind: str, params: PhysicalParams) -> StaticBackground:
    if kind == "schwarzschild":
        return StaticBackground.schwarzschild(params)
    if kind in ("rn", "reissner_nordstrom"):
        return StaticBackground.reissner_nordstrom(params)
    raise ValueError(f"unknown background kind {kind!r}")


def run_spectrum(ctx: SuiteContext) -> SuiteResult:
    p = ctx.params
    kind = ctx.options.get("kind", "schwarzschild")
    levels = int(ctx.options.get("levels", 5))
    if levels < 1:
        raise ValueError("levels must be >= 1")
    bg = _background(kind, p)
    window = default_window(p, levels)
    h = 0.008 if ctx.quick else 0.004
    tab = Table("spectrum", (Column("l", "1"), Column("n", "1"), Column("inv_n2", "1", "1/n^2"),
                             Column("E", "energy", "Numerov eigenvalue"),
                             Column("E_exact", "energy", "-(G M)^2 m^3/(2 hbar^2 n^2)"),
                             Column("rel_err", "1", "|E/E_exact - 1|"), Column("nodes", "count"),
                             Column("expected_nodes", "count", "n - l - 1")))
    by_n = {}
    for l in range(min(3, levels)):
        spec = solve_schrodinger_radial(bg, l, levels - l, window=window, h=h)
        for lv in spec.levels:
            n = lv.n
            exact = hydrogenic_energy(p, n)
            tab.rows.append([l, n, 1.0 / n**2, lv.eigenvalue, exact, abs(lv.eigenvalue / exact - 1.0),
                             lv.node_count, n - l - 1])
            by_n.setdefault(n, []).append(lv.eigenvalue)
    rel = max(r[5] for r in tab.rows)
    nodes_bad = sum(r[6] != r[7] for r in tab.rows)
    degen = max((max(v) - min(v)) / abs(np.mean(v)) for v in by_n.values())
    return SuiteResult("spectrum", [tab], {"kind": bg.kind, "levels": levels, "window": list(window), "h": h,
                                           "max_rel_err": rel, "degeneracy_spread": degen},
                       [ctx.judge("spectrum.relative", rel), ctx.judge("spectrum.nodes", nodes_bad),
                        ctx.judge("spectrum.degeneracy", degen)],
                       [PlotSpec("spectrum", "inv_n2", ("E", "E_exact"), loglog=False, fit=False,
                                 title="E_n against 1/n^2")])


def run_mode_compare(ctx: SuiteContext) -> SuiteResult:
    p = ctx.params
    p_rn = p if p.Q > 0 else replace(p, Q=RN_DEFAULT_Q)
    bg_s, bg_rn = StaticBackground.schwarzschild(p), StaticBackground.reissner_nordstrom(p_rn)
    e1 = hydrogenic_energy(p, 1)
    tab = Table("mode_compare", (C_COL, Column("E_schw", "energy", "hbar omega - m c^2 (Schwarzschild; l=0)"),
                                 Column("E_rn", "energy", "hbar omega - m c^2 (Reissner-Nordstrom; l=0)"),
                                 Column("dev_schw", "energy", "|E_schw - E_1|"),
                                 Column("diff_rn", "energy", "|E_rn - E_schw|"),
                                 Column("diff_rn_rel_omega", "1", "|E_rn - E_schw| / (m c^2 + E_schw)")))
    for c in ctx.sweep(MODE_C):
        es = solve_kg_mode_radial(bg_s, c, 0, 1).eigenvalues()[0]
        er = solve_kg_mode_radial(bg_rn, c, 0, 1).eigenvalues()[0]
        tab.rows.append([float(c), es, er, abs(es - e1), abs(er - es), abs(er - es) / (p.m * c**2 + es)])
    fit_s = fit_power_law([(r[0], r[3]) for r in tab.rows])
    fit_rn = fit_power_law([(r[0], r[4]) for r in tab.rows])
    fit_w = fit_power_law([(r[0], r[5]) for r in tab.rows])
    payload = {"E_1": e1, "Q_rn": p_rn.Q, "schwarzschild_fit": fit_s.to_dict(), "rn_fit": fit_rn.to_dict(),
               "rn_relative_frequency_fit": fit_w.to_dict()}
    return SuiteResult("mode-compare", [tab], payload,
                       [ctx.judge("mode.schwarzschild_exponent", fit_s.fitted_exponent, report=fit_s),
                        ctx.judge("mode.rn_exponent", fit_rn.fitted_exponent, report=fit_rn,
                                  detail=f"diagnostic: relative frequency shift exponent "
                                         f"{fit_w.fitted_exponent:.4f}")],
                       [PlotSpec("mode_compare", "c", ("dev_schw", "diff_rn", "diff_rn_rel_omega"),
                                 title="finite-c mode deviations")])


def run_hadamard(ctx: SuiteContext) -> SuiteResult:
    p = ctx.params
    a = p.bohr_radius
    tau_free = 0.05 * p.m * a**2 / p.hbar**2
    free = diagonal_kernel(StaticBackground.free(p), 2.0 * a, tau_free)
    free_gap = abs(free.rescaled - 1.0)
    bg = StaticBackground.schwarzschild(p)
    probes = (2.0,) if ctx.quick else (2.0, 3.0)
    fits = [fit_hadamard(bg, r * a) for r in probes]
    inside = fit_hadamard(bg, 0.5 * DEFAULT_DELTA * a)
    ftab = Table("hadamard_fit", (Column("probe", "length"), Column("a0", "1"), Column("a1", "energy"),
                                  Column("a2", "energy^2"), Column("sigma_a0", "1", "jackknife"),
                                  Column("residual", "1", "max fit residual"), Column("valid", "flag")))
    stab = Table("hadamard_series", (Column("probe", "length"), Column("tau", "1/energy"),
                                     Column("rescaled", "1", "K(tau;x;x) (2 pi hbar^2 tau/m)^(3/2)")))
    for fit in fits + [inside]:
        ftab.rows.append([fit.probe, fit.a0, fit.a1, fit.a2, fit.sigma[0], fit.residual, int(fit.valid)])
        stab.rows.extend([fit.probe, t, y] for t, y in zip(fit.tau_grid, fit.rescaled))
    valid = [f for f in fits if f.valid]
    gap = max((abs(f.a0 - 1.0) for f in valid), default=math.nan)
    invalid = [f"r={f.probe:g}: {'; '.join(f.reasons)}" for f in fits if not f.valid]
    payload = {"free": {"probe": free.probe, "tau": free.tau, "rescaled": free.rescaled},
               "fits": [f.to_dict() for f in fits], "inside": inside.to_dict()}
    return SuiteResult("hadamard", [ftab, stab], payload,
                       [ctx.judge("hadamard.free", free_gap),
                        ctx.judge("hadamard.a0", gap, detail="; ".join(invalid)),
                        ctx.judge("hadamard.inside_flag", int(inside.valid))],
                       [PlotSpec("hadamard_series", "tau", ("rescaled",), group="probe", loglog=False,
                                 fit=False, title="rescaled heat-kernel diagonal")])


def _spread(x) -> float:
    x = np.asarray(x, dtype=float)
    return float((x.max() - x.min()) / abs(x.mean()))


def run_thermal(ctx: SuiteContext) -> SuiteResult:
    p = ctx.params
    cs = ctx.sweep(default_c_sweep())
    accel = float(ctx.options.get("acceleration", 1.0))
    r_ref = ctx.options.get("r_ref") or 10 * schwarzschild_radius(p, cs.min())
    recs = scaling_table(p, accel, r_ref, cs)
    tab = Table("thermal", (C_COL, Column("T_U", "temperature", "hbar a/(2 pi c k_B)"),
                            Column("T_HH", "temperature", "hbar c^3/(8 pi G M k_B)"),
                            Column("r_s", "length", "2 G M/c^2"),
                            Column("pn", "1", "G M/(r_ref c^2)")),
                [[r.c, r.T_U, r.T_HH, r.r_s, r.pn_small_parameter] for r in recs])
    products = {"T_U c": _spread([r.T_U * r.c for r in recs]),
                "T_HH / c^3": _spread([r.T_HH / r.c**3 for r in recs]),
                "r_s c^2": _spread([r.r_s * r.c**2 for r in recs]),
                "pn c^2": _spread([r.pn_small_parameter * r.c**2 for r in recs])}
    return SuiteResult("thermal", [tab], {"acceleration": accel, "r_ref": r_ref, "product_spread": products},
                       [ctx.judge("thermal.products", max(products.values()))],
                       [PlotSpec("thermal", "c", ("T_U", "T_HH", "r_s"), title="thermal scaling")])


def run_limit_square(ctx: SuiteContext) -> SuiteResult:
    p = ctx.params
    eps = float(ctx.options.get("epsilon", 1.0))
    rep = limit_square_report(p, ctx.sweep(default_c_sweep()), eps)
    tab = Table("limit_square", (C_COL, Column("T_U", "temperature", "hbar a/(2 pi c k_B)"),
                                 Column("T_HH", "temperature", "hbar c^3/(8 pi G M k_B); order (b) only"),
                                 Column("r_s", "length", "2 G M/c^2"),
                                 Column("pn_fixed_r", "1", "order (a): G M/(r_ref c^2)"),
                                 Column("pn_near_horizon", "1", "order (b): G M/(r_s (1+eps) c^2)")),
                rep.csv_rows())
    return SuiteResult("limit-square", [tab], rep.to_dict(),
                       [ctx.judge("limit_square.order_a_exponent", rep.order_a_fit.fitted_exponent,
                                  report=rep.order_a_fit),
                        ctx.judge("limit_square.order_b", rep.order_b_spread,
                                  detail=f"target 1/(2(1+eps)) = {1 / (2 * (1 + eps))!r}")],
                       [PlotSpec("limit_square", "c", ("pn_fixed_r", "pn_near_horizon"), fit=False,
                                 title="two orders of limits")])


SUITES = {
    "dispersion": run_dispersion,
    "flat-wightman": run_flat_wightman,
    "ccr": run_ccr,
    "fock-converge": run_fock_converge,
    "witness": run_witness,
    "contract": run_contract,
    "spectrum": run_spectrum,
    "mode-compare": run_mode_compare,
    "hadamard": run_hadamard,
    "thermal": run_thermal,
    "limit-square": run_limit_square,
}


def run_suite(name: str, ctx: SuiteContext | None = None) -> SuiteResult:
    return SUITES[name](ctx or SuiteContext())
