"""
Radial bound states on static spherically symmetric backgrounds.

Two eigenproblems share one shooting engine:

* the limiting Schrodinger operator ``-(hbar^2/2m) u'' + [hbar^2 l(l+1)/(2 m r^2) + V] u = E u``;
* the finite-c Klein--Gordon mode equation
  ``omega^2 u/(f c^2) + r^-2 (r^2 f u')' - l(l+1) u/r^2 = (m c/hbar)^2 u``
  with ``f = N^2`` the lapse squared, reported through the stripped
  energy ``hbar omega - m c^2``.

Both are brought to ``Y''(x) = g(x; E) Y(x)`` on the logarithmic grid
``x = ln r`` and integrated with Numerov. Eigenvalues are bracketed by
counting nodes of the outward solution (oscillation theorem) and refined
with Brent's method on the two-sided Wronskian at the outer turning point.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numba import njit
from scipy.optimize import brentq

from .kinematics import PhysicalParams

__all__ = [
    "KINDS",
    "StaticBackground",
    "ModeLevel",
    "ModeSpectrum",
    "Horizons",
    "ShootingError",
    "WindowTooSmall",
    "HorizonMarginError",
    "hydrogenic_energy",
    "horizon_radii",
    "default_window",
    "solve_schrodinger_radial",
    "solve_kg_mode_radial",
    "max_pn_ratio",
]

KINDS = ("schwarzschild", "reissner_nordstrom", "custom_lapse")
ALPHA_GRAV_LIMIT = 0.1
RESCALE = 1e150
DEFAULT_H = 0.004  # log-grid step
POINTS_PER_WAVELENGTH = 40
STABILITY = 6.0  # max h^2 g in the Numerov recurrence


class ShootingError(RuntimeError):
    """Eigenvalue bracketing or refinement failed."""


class WindowTooSmall(ShootingError):
    """A requested state drifts when the outer wall is moved out."""


class HorizonMarginError(ValueError):
    """The inner wall sits too close to (or inside) a horizon."""


@dataclass(frozen=True)
class StaticBackground:
    """Static metric ``-f(r) c^2 dt^2 + dr^2/f(r) + r^2 dOmega^2``.

    ``custom_lapse`` takes ``lapse2(r, c) -> (f, f', f'')`` and the limiting
    potential ``potential(r)``.
    """

    kind: str
    params: PhysicalParams
    lapse2_fn: Callable | None = None
    potential_fn: Callable | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.kind == "custom_lapse" and (self.lapse2_fn is None or self.potential_fn is None):
            raise ValueError("custom_lapse needs lapse2_fn and potential_fn")

    @classmethod
    def schwarzschild(cls, params: PhysicalParams) -> "StaticBackground":
        return cls("schwarzschild", params)

    @classmethod
    def reissner_nordstrom(cls, params: PhysicalParams) -> "StaticBackground":
        return cls("reissner_nordstrom", params)

    @classmethod
    def free(cls, params: PhysicalParams) -> "StaticBackground":
        """Flat space, ``V = 0``."""
        def lapse2(r, c):
            one = np.ones_like(np.asarray(r, dtype=float))
            return one, 0 * one, 0 * one
        return cls("custom_lapse", params, lapse2, lambda r: np.zeros_like(np.asarray(r, dtype=float)))

    def _ab(self, c):
        p = self.params
        a = 2 * p.G * p.M / c**2
        b = p.charge_length2 / c**4 if self.kind == "reissner_nordstrom" else 0.0
        return a, b

    def lapse2(self, r, c):
        """``(f, f', f'')`` at radius ``r``."""
        r = np.asarray(r, dtype=float)
        if self.kind == "custom_lapse":
            return self.lapse2_fn(r, c)
        a, b = self._ab(c)
        return 1 - a / r + b / r**2, a / r**2 - 2 * b / r**3, -2 * a / r**3 + 6 * b / r**4

    def one_minus_lapse2_scaled(self, r, c):
        """``(m c/hbar)^2 (1 - f)`` without cancellation."""
        p = self.params
        r = np.asarray(r, dtype=float)
        if self.kind == "custom_lapse":
            f, _, _ = self.lapse2_fn(r, c)
            return (p.m * c / p.hbar) ** 2 * (1 - f)
        out = 2 * p.G * p.M * p.m**2 / (p.hbar**2 * r)
        if self.kind == "reissner_nordstrom":
            out = out - p.m**2 * p.charge_length2 / (p.hbar**2 * c**2 * r**2)
        return out

    def potential(self, r):
        """Limiting Newtonian potential; ``-G M m / r`` for both black holes."""
        r = np.asarray(r, dtype=float)
        if self.kind == "custom_lapse":
            return self.potential_fn(r)
        p = self.params
        return -p.G * p.M * p.m / r


@dataclass(frozen=True)
class Horizons:
    radii: tuple
    naked: bool = False

    def __iter__(self):
        return iter(self.radii)

    def __len__(self):
        return len(self.radii)

    def __getitem__(self, i):
        return self.radii[i]


def horizon_radii(bg: StaticBackground, c: float) -> Horizons:
    """Schwarzschild ``[r_s]``; RN ``[r_-, r_+]``, empty and ``naked`` if the discriminant is negative."""
    p = bg.params
    if bg.kind == "schwarzschild":
        return Horizons((2 * p.G * p.M / c**2,))
    if bg.kind == "reissner_nordstrom":
        half = p.G * p.M / c**2
        disc = half**2 - p.charge_length2 / c**4
        if disc < 0:
            return Horizons((), naked=True)
        s = math.sqrt(disc)
        # r_- = b/r_+ avoids cancellation when the charge is small
        rp = half + s
        return Horizons((p.charge_length2 / c**4 / rp, rp))
    return Horizons(())


def hydrogenic_energy(params: PhysicalParams, n: int) -> float:
    """``-(G M)^2 m^3 / (2 hbar^2 n^2)``."""
    if int(n) != n or n < 1:
        raise ValueError("n must be an integer >= 1")
    return -((params.G * params.M) ** 2) * params.m**3 / (2 * params.hbar**2 * n**2)


def default_window(params: PhysicalParams, n_max: int = 5) -> tuple:
    """``(1e-9 a, 40 (n_max + 1)^2 a / ...)`` in units of the Bohr-like radius ``a``.

    The outer wall sits far beyond the classical turning point of level
    ``n_max`` (``2 n^2 a``) so that doubling it is invisible at 1e-8.
    """
    a = params.bohr_radius
    return (1e-9 * a, max(60.0, 8.0 * (n_max + 1) ** 2) * a)


@dataclass(frozen=True)
class ModeLevel:
    n: int
    l: int
    eigenvalue: float
    node_count: int


@dataclass(frozen=True)
class ModeSpectrum:
    levels: tuple
    window: tuple
    grid_step: float
    tolerance: float
    c: float = math.inf
    kind: str = ""
    functions: dict = field(default_factory=dict, compare=False, repr=False)

    def eigenvalues(self, l: int | None = None) -> np.ndarray:
        return np.array([lv.eigenvalue for lv in self.levels if l is None or lv.l == l])

    def csv_rows(self) -> list:
        """``(kind, c_or_inf, l, n, eigenvalue, nodes, r_in, r_out)`` per level."""
        return [(self.kind, self.c, lv.l, lv.n, lv.eigenvalue, lv.node_count, *self.window) for lv in self.levels]


# -- Numerov engine -----------------------------------------------------------


@njit(cache=True)
def _numerov(g, h, y1):
    """Integrate ``y'' = g y`` from ``y[0] = 0``, ``y[1] = y1``; returns (y, interior sign changes)."""
    n = g.size
    y = np.zeros(n)
    y[1] = y1
    c = h * h / 12.0
    nodes = 0
    for i in range(1, n - 1):
        y[i + 1] = (2.0 * y[i] * (1.0 + 5.0 * c * g[i]) - y[i - 1] * (1.0 - c * g[i - 1])) / (1.0 - c * g[i + 1])
        if abs(y[i + 1]) > RESCALE:
            for j in range(i + 2):
                y[j] /= RESCALE
        if i + 1 < n - 1 and y[i + 1] * y[i] < 0.0:
            nodes += 1
        elif y[i] == 0.0 and i > 1 and y[i + 1] * y[i - 1] < 0.0:
            nodes += 1
    return y, nodes


class _Problem:
    """``g(x; E)`` on a log grid plus the shooting primitives."""

    def __init__(self, r_in, r_out, h, gfun):
        if not 0 < r_in < r_out:
            raise ValueError("window must satisfy 0 < r_in < r_out")
        n = int(math.ceil(math.log(r_out / r_in) / h)) + 1
        self.x = np.linspace(math.log(r_in), math.log(r_out), n)
        self.h = float(self.x[1] - self.x[0])
        self.r = np.exp(self.x)
        self.gfun = gfun

    def g(self, E):
        return self.gfun(self.r, E)

    def count(self, E) -> int:
        _, nodes = _numerov(self.g(E), self.h, 1e-30)
        return nodes

    def _match_index(self, g):
        allowed = np.nonzero(g < 0)[0]
        n = g.size
        m = int(allowed[-1]) if allowed.size else n // 2
        return min(max(m, 2), n - 3)

    def wronskian(self, E) -> float:
        g = self.g(E)
        m = self._match_index(g)
        yo, _ = _numerov(g, self.h, 1e-30)
        yi, _ = _numerov(g[::-1].copy(), self.h, 1e-30)
        yi = yi[::-1]
        so = max(abs(yo[m - 1]), abs(yo[m]), abs(yo[m + 1]))
        si = max(abs(yi[m - 1]), abs(yi[m]), abs(yi[m + 1]))
        return float((yo[m] * (yi[m + 1] - yi[m - 1]) - yi[m] * (yo[m + 1] - yo[m - 1])) / (so * si))

    def eigenfunction(self, E):
        """``(r, Y, nodes)`` with outward and inward pieces joined at the turning point."""
        g = self.g(E)
        m = self._match_index(g)
        yo, _ = _numerov(g, self.h, 1e-30)
        yi, _ = _numerov(g[::-1].copy(), self.h, 1e-30)
        yi = yi[::-1]
        y = np.concatenate([yo[: m + 1] / yo[m], yi[m + 1:] / yi[m]])
        norm = math.sqrt(float(np.sum(y**2 * self.r**2)) * self.h)  # \int u^2 dr, u = r^(1/2) Y, dr = r dx
        y = y / norm
        big = np.abs(y) > 1e-8 * np.max(np.abs(y))
        ys = y[big]
        nodes = int(np.sum(ys[1:] * ys[:-1] < 0))
        return self.r, y, nodes


def _bracket(prob: _Problem, count: int, e_lo: float, e_hi: float):
    """Grow ``[e_lo, e_hi]`` until it holds no state below and ``count`` states below ``e_hi``."""
    step = max(abs(e_lo), 1.0)
    for _ in range(200):
        if prob.count(e_lo) == 0:
            break
        e_lo -= step
        step *= 2
    else:
        raise ShootingError("could not find an energy below the ground state")
    step = max(abs(e_hi - e_lo), 1.0)
    for _ in range(200):
        if prob.count(e_hi) >= count:
            break
        e_hi += step
        step *= 2
    else:
        raise ShootingError("could not bracket the requested number of states")
    return e_lo, e_hi


def _isolate(prob: _Problem, j: int, lo: float, hi: float, c_lo: int, c_hi: int):
    """Shrink to an interval holding exactly the j-th state (counts j-1 -> j)."""
    for _ in range(200):
        if c_lo == j - 1 and c_hi == j:
            return lo, hi
        mid = 0.5 * (lo + hi)
        cm = prob.count(mid)
        if cm >= j:
            hi, c_hi = mid, cm
        else:
            lo, c_lo = mid, cm
        if hi - lo <= 1e-15 * max(abs(lo), abs(hi)):
            raise ShootingError(f"states {j - 1} and {j} not separable (degenerate within rounding)")
    raise ShootingError("bisection on node count did not converge")


def _solve(prob: _Problem, count: int, e_lo: float, e_hi: float, xtol: float):
    e_lo, e_hi = _bracket(prob, count, e_lo, e_hi)
    c_hi = prob.count(e_hi)
    out = []
    lo, c_lo = e_lo, 0
    for j in range(1, count + 1):
        a, b = _isolate(prob, j, lo, e_hi, c_lo, c_hi)
        try:
            E = brentq(prob.wronskian, a, b, xtol=xtol * max(abs(a), abs(b), 1e-300), rtol=4 * np.finfo(float).eps,
                       maxiter=500)
        except ValueError as exc:
            raise ShootingError(f"no sign change of the matching determinant for state {j}") from exc
        out.append(E)
        lo, c_lo = b, j
    return out


def _resolve_step(prob_factory, window, h, e_top):
    """Step satisfying ``POINTS_PER_WAVELENGTH`` at energy ``e_top`` (never coarser than ``h``)."""
    prob = prob_factory(window, h)
    g = prob.g(e_top)
    kmax = math.sqrt(max(float(np.max(-g)), 0.0))
    if kmax > 0:
        h_needed = 2 * math.pi / (POINTS_PER_WAVELENGTH * kmax)
        if h_needed < h:
            return h_needed
    return h


def _stable_step(prob_factory, window, h, e_lo):
    """Cap ``h`` so that ``h^2 g <= 6`` everywhere at ``e_lo``.

    Past ``h^2 g = 12`` the Numerov recurrence flips sign in forbidden
    regions and counts nodes that are not there.
    """
    gmax = float(np.max(prob_factory(window, h).g(e_lo)))
    if gmax > 0 and h * h * gmax > STABILITY:
        return math.sqrt(STABILITY / gmax)
    return h


def _run(prob_factory, window, l, count, h, xtol, check_window, e_lo, e_hi, keep_functions):
    widest = (window[0], 2 * window[1]) if check_window else window
    h = _stable_step(prob_factory, widest, h, e_lo)
    prob = prob_factory(window, h)
    e_lo, e_hi = _bracket(prob, count, e_lo, e_hi)
    h = min(_resolve_step(prob_factory, window, h, e_hi), _stable_step(prob_factory, widest, h, e_lo))
    prob = prob_factory(window, h)
    energies = _solve(prob, count, e_lo, e_hi, xtol)
    if check_window:
        wider = (window[0], 2 * window[1])
        prob2 = prob_factory(wider, h)
        e2 = _solve(prob2, count, e_lo, e_hi, xtol)
        for j, (a, b) in enumerate(zip(energies, e2)):
            if abs(a - b) > 1e-8 * max(abs(a), 1e-300):
                raise WindowTooSmall(f"state {j + 1} (l={l}) moves by {abs(a - b):.3g} when r_out is doubled")
    levels, funcs = [], {}
    for E in energies:
        r, y, nodes = prob.eigenfunction(E)
        n = nodes + l + 1
        levels.append(ModeLevel(n, l, float(E), nodes))
        if keep_functions:
            funcs[(n, l)] = (r, np.sqrt(r) * y)  # u(r) = r^(1/2) Y, unit norm in dr
    for a, b in zip(levels, levels[1:]):
        if not b.eigenvalue > a.eigenvalue:
            raise ShootingError("eigenvalues not strictly increasing")
    return levels, funcs, h


def _gate(params: PhysicalParams, c: float):
    if math.isfinite(c) and params.G * params.M * params.m / (params.hbar * c) >= ALPHA_GRAV_LIMIT:
        warnings.warn(f"G M m/(hbar c) = {params.G * params.M * params.m / (params.hbar * c):.3g} >= "
                      f"{ALPHA_GRAV_LIMIT}: outside the weak-coupling regime", RuntimeWarning, stacklevel=3)


def _energy_floor(bg: StaticBackground, window) -> float:
    """Starting guess below the ground state; :func:`_bracket` lowers it if needed."""
    if bg.kind == "custom_lapse":
        return float(np.min(bg.potential(np.geomspace(*window, 256)))) - 1.0
    return 2 * hydrogenic_energy(bg.params, 1)


def solve_schrodinger_radial(bg: StaticBackground, l: int, count: int, window=None, h: float = DEFAULT_H,
                             xtol: float = 1e-13, check_window: bool = True,
                             keep_functions: bool = False) -> ModeSpectrum:
    """Lowest ``count`` eigenvalues of the limiting radial Schrodinger operator.

    Dirichlet walls at ``window = (r_in, r_out)``; the default window is
    :func:`default_window`. Raises :class:`WindowTooSmall` if doubling
    ``r_out`` moves any requested level by more than 1e-8 relative.
    """
    if l < 0 or count < 1:
        raise ValueError("need l >= 0 and count >= 1")
    p = bg.params
    window = tuple(window or default_window(p))
    k2 = 2 * p.m / p.hbar**2
    ll = (l + 0.5) ** 2

    def gfun(r, E):
        return ll + k2 * r**2 * (bg.potential(r) - E)

    def factory(win, step):
        return _Problem(win[0], win[1], step, gfun)

    levels, funcs, step = _run(factory, window, l, count, h, xtol, check_window, _energy_floor(bg, window),
                               0.0, keep_functions)
    return ModeSpectrum(tuple(levels), window, step, xtol, math.inf, bg.kind, funcs)


def solve_kg_mode_radial(bg: StaticBackground, c: float, l: int, count: int, window=None, h: float = DEFAULT_H,
                         xtol: float = 1e-13, check_window: bool = True, margin: float = 1.0,
                         keep_functions: bool = False) -> ModeSpectrum:
    """Lowest ``count`` stripped eigenfrequencies ``hbar omega - m c^2`` of the mode equation.

    The inner wall is moved out to ``max(10 r_s(c), r_in)``; a wall closer
    than ``(1 + margin)`` times the outer horizon is rejected.

    Raises
    ------
    HorizonMarginError
        If the inner wall violates the horizon margin or the background is naked.
    """
    if l < 0 or count < 1:
        raise ValueError("need l >= 0 and count >= 1")
    if margin < 1:
        raise ValueError("margin must be >= 1")
    p = bg.params
    _gate(p, c)
    window = tuple(window or default_window(p))
    rs = 2 * p.G * p.M / c**2
    r_in = max(10 * rs, window[0]) if bg.kind != "custom_lapse" else window[0]
    hz = horizon_radii(bg, c)
    if hz.naked:
        raise HorizonMarginError("naked singularity: no horizon to keep a margin from")
    if len(hz) and r_in <= hz[-1] * (1 + margin):
        raise HorizonMarginError(f"inner wall {r_in:.3g} within the horizon margin of r = {hz[-1]:.3g}")
    window = (r_in, window[1])
    hb, m = p.hbar, p.m
    ll = l * (l + 1)

    def gfun(r, E):
        f, f1, f2 = bg.lapse2(r, c)
        e = 2 * m * E / hb**2 + (E / (hb * c)) ** 2
        W = (bg.one_minus_lapse2_scaled(r, c) + e) / f - ll / r**2
        Q = W / f - f1 / (r * f) - f2 / (2 * f) + f1**2 / (4 * f**2)
        return 0.25 - r**2 * Q

    def factory(win, step):
        return _Problem(win[0], win[1], step, gfun)

    levels, funcs, step = _run(factory, window, l, count, h, xtol, check_window, _energy_floor(bg, window),
                               0.0, keep_functions)
    return ModeSpectrum(tuple(levels), window, step, xtol, float(c), bg.kind, funcs)


def max_pn_ratio(bg: StaticBackground, c: float, window) -> float:
    """``max |V(r)|/(m c^2)`` over the window (``G M/(r_in c^2)`` for the black holes)."""
    r = np.geomspace(window[0], window[1], 256)
    return float(np.max(np.abs(bg.potential(r)))) / (bg.params.m * c**2)
