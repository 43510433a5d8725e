"""
Poincare -> Galilei/Bargmann contraction.

Two levels. Structure constants: brackets ``[A, B] = i hbar sum_C f_AB^C(u) C``
with coefficients rational in ``u = 1/c^2`` (held exactly by sympy), and the
contraction sets ``u = 0``. Representation: the one-particle operators H, P
and a symmetrised finite-difference boost K on a 1-D momentum line, whose
commutators reproduce the brackets up to O(h^2) and whose ``H/c^2`` tends to
the central mass ``m``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import sympy

from .kinematics import Dispersion, PhysicalParams
from .reporting import ConvergenceReport, fit_power_law

__all__ = [
    "U",
    "CParamAlgebra",
    "PoleAtContraction",
    "poincare_algebra",
    "contract_algebra",
    "MomentumLine",
    "GridOperator",
    "GridTooCoarse",
    "build_one_particle_reps",
    "gaussian_packet",
    "commutator_residuals",
    "h_halving_ratios",
    "mass_commutator_defect",
    "central_charge_limit",
]

U = sympy.Symbol("u")  # 1/c^2

SPATIAL = ("1", "2", "3")


class PoleAtContraction(ValueError):
    """A bracket coefficient has a pole at 1/c^2 = 0."""


def _levi(i, j, k):
    return int(sympy.LeviCivita(i, j, k))


@dataclass(frozen=True)
class CParamAlgebra:
    """Lie algebra with structure constants rational in ``u = 1/c^2``.

    ``brackets[(A, B)]`` lists ``(C, coefficient)``; ``i hbar`` is factored
    out. Only one ordering of each pair is stored, the other follows by
    antisymmetry. Labels not appearing in any stored pair commute with
    everything.
    """

    labels: tuple
    brackets: dict = field(default_factory=dict)
    central: tuple = ()

    def bracket(self, a: str, b: str) -> dict:
        """``{C: coefficient}`` of ``[a, b]`` (zero coefficients dropped)."""
        if (a, b) in self.brackets:
            sign, items = 1, self.brackets[(a, b)]
        elif (b, a) in self.brackets:
            sign, items = -1, self.brackets[(b, a)]
        else:
            return {}
        out = {}
        for label, coef in items:
            out[label] = sympy.cancel(out.get(label, 0) + sign * coef)
        return {k: v for k, v in out.items() if v != 0}

    def bracket_linear(self, x: dict, b: str) -> dict:
        """``[x, b]`` for a linear combination ``x = {label: coefficient}``."""
        out = {}
        for a, ca in x.items():
            for c_, cc in self.bracket(a, b).items():
                out[c_] = out.get(c_, 0) + ca * cc
        return {k: sympy.cancel(v) for k, v in out.items() if sympy.cancel(v) != 0}

    def antisymmetry_defects(self) -> list:
        """Pairs whose stored brackets contradict antisymmetry (both orders stored)."""
        bad = []
        for (a, b), items in self.brackets.items():
            if a == b and items:
                bad.append((a, b))
            if (b, a) in self.brackets and a < b:
                lhs = dict(items)
                rhs = dict(self.brackets[(b, a)])
                keys = set(lhs) | set(rhs)
                if any(sympy.cancel(lhs.get(k, 0) + rhs.get(k, 0)) != 0 for k in keys):
                    bad.append((a, b))
        return bad

    def jacobi_defects(self) -> list:
        """Triples where ``[[a,b],c] + [[b,c],a] + [[c,a],b]`` is not identically zero."""
        bad = []
        for a, b, c in itertools.combinations(self.labels, 3):
            total = {}
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                for k, v in self.bracket_linear(self.bracket(x, y), z).items():
                    total[k] = total.get(k, 0) + v
            if any(sympy.cancel(v) != 0 for v in total.values()):
                bad.append((a, b, c))
        return bad

    def listing(self) -> str:
        """Human-readable table of the nonzero brackets."""
        lines = []
        for (a, b), items in sorted(self.brackets.items()):
            terms = [f"({sympy.sstr(sympy.factor(co))}) {lab}" for lab, co in items if co != 0]
            if terms:
                lines.append(f"[{a}, {b}] = i hbar ( " + " + ".join(terms) + " )")
        return "\n".join(lines)


def poincare_algebra(rest_shifted: bool = False) -> CParamAlgebra:
    """Poincare algebra with speed-of-light dependence through ``u = 1/c^2``.

    Basis ``H, P_i, J_i, K_i`` and a central ``M`` (inert here). With
    ``rest_shifted`` the energy is split as ``H = M c^2 + E`` and ``E`` used as
    basis element instead; then ``[K_i, P_j] = i hbar delta_ij (M + u E)`` and the
    contraction lands on the Bargmann algebra instead of the Galilei one.
    """
    energy = "E" if rest_shifted else "H"
    labels = (energy,) + tuple(f"{n}{i}" for n in "PJK" for i in SPATIAL) + ("M",)
    br = {}
    idx = range(3)
    for i, j in itertools.combinations(idx, 2):
        k = 3 - i - j
        e = _levi(i, j, k)
        for n in "JPK":
            # [J_i, X_j] = eps_ijk X_k  for X in {J, P, K}
            br[(f"J{SPATIAL[i]}", f"{n}{SPATIAL[j]}")] = [(f"{n}{SPATIAL[k]}", sympy.Integer(e))]
            if n != "J":
                br[(f"J{SPATIAL[j]}", f"{n}{SPATIAL[i]}")] = [(f"{n}{SPATIAL[k]}", sympy.Integer(-e))]
        br[(f"K{SPATIAL[i]}", f"K{SPATIAL[j]}")] = [(f"J{SPATIAL[k]}", -U * e)]
    for i in idx:
        if rest_shifted:
            br[(f"K{SPATIAL[i]}", f"P{SPATIAL[i]}")] = [("M", sympy.Integer(1)), ("E", U)]
        else:
            br[(f"K{SPATIAL[i]}", f"P{SPATIAL[i]}")] = [("H", U)]
        br[(f"K{SPATIAL[i]}", energy)] = [(f"P{SPATIAL[i]}", sympy.Integer(1))]
    return CParamAlgebra(labels, br, central=("M",))


def contract_algebra(a: CParamAlgebra) -> CParamAlgebra:
    """Evaluate every coefficient at ``u = 0``.

    Raises
    ------
    PoleAtContraction
        If a coefficient's denominator vanishes at ``u = 0``.
    """
    out = {}
    for pair, items in a.brackets.items():
        new = []
        for label, coef in items:
            num, den = sympy.fraction(sympy.cancel(sympy.sympify(coef)))
            if den.subs(U, 0) == 0:
                raise PoleAtContraction(f"coefficient {coef} of {label} in {pair} has a pole at 1/c^2 = 0")
            val = sympy.nsimplify(num.subs(U, 0) / den.subs(U, 0))
            if val != 0:
                new.append((label, val))
        out[pair] = new
    return CParamAlgebra(a.labels, out, a.central)


# -- one-particle representation ---------------------------------------------


class GridTooCoarse(ValueError):
    """Grid spacing exceeds the Compton wavenumber ``m c / hbar``."""


@dataclass(frozen=True)
class MomentumLine:
    """Uniform grid ``k_j = -k_max + j h`` with ``n`` points (Dirichlet ends)."""

    k_max: float
    n: int

    def __post_init__(self):
        if not self.k_max > 0 or self.n < 32:
            raise ValueError("need k_max > 0 and n >= 32")

    @property
    def points(self) -> np.ndarray:
        return np.linspace(-self.k_max, self.k_max, self.n)

    @property
    def h(self) -> float:
        return 2.0 * self.k_max / (self.n - 1)

    def halved(self) -> "MomentumLine":
        return MomentumLine(self.k_max, 2 * self.n - 1)

    def norm(self, v) -> float:
        return math.sqrt(self.h * float(np.sum(np.abs(v) ** 2)))


@dataclass(frozen=True)
class GridOperator:
    matrix: sp.spmatrix
    hermitian: bool = False

    def __post_init__(self):
        object.__setattr__(self, "matrix", sp.csr_matrix(self.matrix))
        if self.hermitian:
            d = self.hermiticity_defect()
            scale = max(abs(self.matrix).max(), 1.0)
            if d >= 1e-12 * scale:
                raise ValueError(f"operator flagged hermitian has defect {d:.3g}")

    def hermiticity_defect(self) -> float:
        diff = self.matrix - self.matrix.conj().T
        return float(abs(diff).max()) if diff.nnz else 0.0

    def __call__(self, v):
        return self.matrix @ v

    def commutator(self, other: "GridOperator", v):
        """``[self, other] v``."""
        return self(other(v)) - other(self(v))


def build_one_particle_reps(params: PhysicalParams, c: float, grid: MomentumLine):
    """``H = diag(hbar omega)``, ``P = diag(hbar k)``, ``K = (i hbar/2c^2)(W D + D W)``.

    ``D`` is the central difference (antisymmetric), so ``K`` is hermitian.

    Raises
    ------
    GridTooCoarse
        If ``h > m c / hbar``: the frequency would change by O(1) per cell.
    """
    if grid.h > params.m * c / params.hbar:
        raise GridTooCoarse(f"h = {grid.h:.3g} exceeds m c/hbar = {params.m * c / params.hbar:.3g}")
    k = grid.points
    hb = params.hbar
    w = Dispersion(params, c).omega(k)
    n = grid.n
    D = sp.diags([np.full(n - 1, 0.5 / grid.h), np.full(n - 1, -0.5 / grid.h)], [1, -1])
    W = sp.diags(w)
    H = GridOperator(sp.diags(hb * w + 0j), hermitian=True)
    P = GridOperator(sp.diags(hb * k + 0j), hermitian=True)
    K = GridOperator((1j * hb / (2 * c**2)) * (W @ D + D @ W), hermitian=True)
    return H, P, K


def gaussian_packet(grid: MomentumLine, sigma_k: float = 1.0, k0: float = 0.0) -> np.ndarray:
    """Unit-norm Gaussian on the line; must vanish (below 1e-14) within 10 cells of the ends."""
    v = np.exp(-((grid.points - k0) ** 2) / (2 * sigma_k**2)).astype(complex)
    v /= grid.norm(v)
    _check_interior(v)
    return v


def _check_interior(v):
    edge = max(np.max(np.abs(v[:10])), np.max(np.abs(v[-10:])))
    if edge > 1e-14 * np.max(np.abs(v)):
        raise ValueError("test vector must vanish within 10 cells of the grid ends")


def commutator_residuals(params: PhysicalParams, c: float, grid: MomentumLine, v) -> dict:
    """Relative residuals of ``[K,P] = (i hbar/c^2) H`` and ``[K,H] = i hbar P`` on ``v``."""
    _check_interior(v)
    H, P, K = build_one_particle_reps(params, c, grid)
    hb = params.hbar
    nv = grid.norm(v)
    kp = K.commutator(P, v) - (1j * hb / c**2) * H(v)
    kh = K.commutator(H, v) - 1j * hb * P(v)
    return {"KP": grid.norm(kp) / nv, "KH": grid.norm(kh) / nv}


def h_halving_ratios(params: PhysicalParams, c: float, grid: MomentumLine, sigma_k: float = 1.0,
                     levels: int = 3) -> dict:
    """Residuals on successively halved grids and their ratios (4 for O(h^2))."""
    res = []
    g = grid
    for _ in range(levels):
        res.append(commutator_residuals(params, c, g, gaussian_packet(g, sigma_k)))
        g = g.halved()
    ratios = {key: [res[i][key] / res[i + 1][key] for i in range(levels - 1)] for key in ("KP", "KH")}
    return {"residuals": res, "ratios": ratios}


def mass_commutator_defect(params: PhysicalParams, c: float, grid: MomentumLine, v) -> float:
    """``||[K,P] v/(i hbar) - m v|| / ||v||``: kinetic part plus an O(h^2) floor."""
    _check_interior(v)
    H, P, K = build_one_particle_reps(params, c, grid)
    r = K.commutator(P, v) / (1j * params.hbar) - params.m * v
    return grid.norm(r) / grid.norm(v)


def central_charge_limit(params: PhysicalParams, c_values, grid: MomentumLine, v) -> ConvergenceReport:
    """Fit the decay of ``||(H/c^2 - m) v||`` over ``c_values``.

    ``H/c^2 - m`` is evaluated as ``hbar omega_stripped / c^2`` to keep the
    small difference exact.
    """
    _check_interior(v)
    nv = grid.norm(v)
    samples = []
    for c in c_values:
        build_one_particle_reps(params, c, grid)  # coarse-grid guard
        shifted = params.hbar * Dispersion(params, c).omega_stripped(grid.points) / c**2
        samples.append((float(c), grid.norm(shifted * v) / nv))
    return fit_power_law(samples)
