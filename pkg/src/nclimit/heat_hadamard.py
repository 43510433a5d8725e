"""
Imaginary-time heat kernel of ``H = -hbar^2/(2m) Laplacian + V(r)`` and its
short-time (Seeley--DeWitt) coefficients.

``tau`` has units of inverse energy: the kernel is that of ``exp(-tau H)``,
and the free diagonal is ``(m/(2 pi hbar^2 tau))^(3/2)``. Each angular
momentum sector is propagated on a uniform radial grid that excludes a ball
of radius ``delta`` around the origin (Dirichlet walls at both ends) with
Crank--Nicolson, started by four half-size implicit Euler steps to damp the
stiffest modes. The 3-D diagonal at radius ``r`` is
``sum_l (2l+1) k_l(tau; r, r) / (4 pi r^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .reporting import FitError, richardson
from .static_modes import StaticBackground

__all__ = [
    "DEFAULT_DELTA",
    "RadialGrid",
    "RadialFunction",
    "HeatKernelSample",
    "HadamardFit",
    "StepRejection",
    "DomainError",
    "BoundaryContamination",
    "radial_hamiltonian",
    "propagate_heat",
    "radial_kernel",
    "diagonal_kernel",
    "fit_hadamard",
    "free_diagonal",
    "default_tau_grid",
]

DEFAULT_DELTA = 0.05  # in Bohr-like radii
ISOLATION = 5.0  # kernel widths between a probe and any wall
REL_STEP = 1.0 / 400  # time step as a fraction of the elapsed tau
UNDERSHOOT = 1e-10
L_START = 12
L_CAP = 384


class StepRejection(RuntimeError):
    """Time stepping kept violating positivity after repeated step halving."""


class DomainError(ValueError):
    """A probe or grid touches the excluded ball ``r < delta``."""


class BoundaryContamination(RuntimeError):
    """The kernel reaches a wall within the requested tolerance."""


@dataclass(frozen=True)
class RadialGrid:
    """Interior nodes ``r_j = r_lo + j h``, ``j = 1..n`` (walls at ``r_lo`` and ``r_lo + (n+1) h``)."""

    r_lo: float
    h: float
    n: int

    @classmethod
    def spanning(cls, r_lo: float, r_hi: float, h: float, anchor: float | None = None) -> "RadialGrid":
        """Grid on ``(r_lo, r_hi)`` with step close to ``h``; ``anchor`` is placed exactly on a node."""
        if not 0 < r_lo < r_hi:
            raise ValueError("need 0 < r_lo < r_hi")
        if anchor is not None:
            if not r_lo < anchor < r_hi:
                raise ValueError("anchor must lie inside the grid")
            k = max(1, int(round((anchor - r_lo) / h)))
            h = (anchor - r_lo) / k
        n = int(math.floor((r_hi - r_lo) / h)) - 1
        return cls(r_lo, h, n)

    @property
    def r(self) -> np.ndarray:
        return self.r_lo + self.h * np.arange(1, self.n + 1)

    @property
    def r_hi(self) -> float:
        return self.r_lo + (self.n + 1) * self.h

    def index(self, r: float) -> int:
        j = int(round((r - self.r_lo) / self.h)) - 1
        if not 0 <= j < self.n or abs(self.r[j] - r) > 1e-9 * self.h:
            raise ValueError(f"r = {r} is not a grid node")
        return j


@dataclass(frozen=True)
class RadialFunction:
    grid: RadialGrid
    u: np.ndarray

    @property
    def r(self):
        return self.grid.r

    def norm(self) -> float:
        return math.sqrt(self.grid.h * float(np.sum(np.abs(self.u) ** 2)))


def radial_hamiltonian(bg: StaticBackground, l: int, grid: RadialGrid) -> sp.csc_matrix:
    """Five-point discretisation of ``-(hbar^2/2m) d^2/dr^2 + hbar^2 l(l+1)/(2 m r^2) + V``.

    Rows next to a wall fall back to the three-point stencil; the matrix is
    symmetric.
    """
    p = bg.params
    n, h = grid.n, grid.h
    kin = p.hbar**2 / (2 * p.m)
    r = grid.r
    diag = np.full(n, 30.0 / 12.0)
    off1 = np.full(n - 1, -16.0 / 12.0)
    off2 = np.full(n - 2, 1.0 / 12.0)
    # three-point rows at both ends keep the stencil inside the walls
    for j in (0, n - 1):
        diag[j] = 2.0
    off1[0] = off1[-1] = -1.0
    off2[0] = off2[-1] = 0.0
    # symmetric: entry (1, 0) must equal (0, 1) = -1 and (n-2, n-1) = -1
    T = sp.diags([off2, off1, diag, off1, off2], [-2, -1, 0, 1, 2], format="lil")
    T[1, 0] = T[0, 1] = -1.0
    T[n - 2, n - 1] = T[n - 1, n - 2] = -1.0
    pot = bg.potential(r) + kin * l * (l + 1) / r**2
    return (kin / h**2 * T.tocsc() + sp.diags(pot)).tocsc()


def _steps(tau_points, rel_step):
    """Per-segment step counts and sizes hitting every output time exactly.

    Up to the first output the step is ``rel_step * tau_points[0]``; later
    segments use ``rel_step`` times the segment start, which keeps the
    Crank--Nicolson error per unit ``log tau`` roughly uniform.
    """
    out, prev = [], 0.0
    for t in tau_points:
        seg = t - prev
        k = max(1, int(math.ceil(seg / (rel_step * max(prev, tau_points[0])) - 1e-9)))
        out.append((k, seg / k))
        prev = t
    return out


def _evolve(H, u0, tau_points, rel_step, rannacher: int = 4):
    """Crank--Nicolson with implicit-Euler start; returns states at ``tau_points``.

    With ``A = 1 + dt H/2`` a step is ``u <- A^-1 (1 - dt H/2) u = 2 A^-1 u - u``.
    """
    n = H.shape[0]
    eye = sp.identity(n, format="csc")
    u = np.array(u0, dtype=float)
    outs = []
    for i, (k, dt) in enumerate(_steps(tau_points, rel_step)):
        start = 0
        if i == 0 and rannacher:
            # four half steps of implicit Euler replace the first two steps
            be = splu((eye + 0.5 * dt * H).tocsc())
            for _ in range(rannacher):
                u = be.solve(u)
            start = rannacher // 2
        cn = splu((eye + 0.5 * dt * H).tocsc())
        for _ in range(start, k):
            u = 2.0 * cn.solve(u) - u
        outs.append(u.copy())
    return outs


def _positive(states, scale):
    worst = min(float(np.min(s)) for s in states)
    return worst >= -UNDERSHOOT * scale, worst


def _propagate_checked(H, u0, tau_points, rel_step, max_halvings=4):
    scale = float(np.max(np.abs(u0)))
    cascade = []
    for attempt in range(max_halvings + 1):
        states = _evolve(H, u0, tau_points, rel_step)
        if np.min(u0) < 0:
            return states, cascade  # signed data: positivity not applicable
        ok, worst = _positive(states, scale * 1.0)
        if ok:
            return states, cascade
        cascade.append((rel_step, worst))
        rel_step *= 0.5
    raise StepRejection(f"positivity lost after {max_halvings} halvings: {cascade}")


def default_tau_grid(params, r_probe: float, delta: float | None = None, n: int = 6) -> np.ndarray:
    """Geometric grid spanning a factor 7.5 below ``tau_max``.

    ``tau_max`` keeps the probe five kernel widths from the inner wall and
    stays below ``0.15 m a^2/hbar^2`` (``a`` the Bohr-like radius).
    """
    a = params.bohr_radius
    delta = DEFAULT_DELTA * a if delta is None else delta
    unit = params.hbar**2 / params.m  # length^2 per unit tau
    tau_max = 0.15 * a**2 / unit
    if r_probe > delta:
        tau_max = min(tau_max, ((r_probe - delta) / ISOLATION) ** 2 / unit)
    return np.geomspace(tau_max / 7.5, tau_max, n)


def propagate_heat(bg: StaticBackground, l: int, tau: float, initial, grid: RadialGrid | None = None,
                   delta: float | None = None, r_out: float | None = None, h: float | None = None,
                   n_steps: int = 400) -> RadialFunction:
    """``exp(-tau H_l) u0`` for the radial (``u = r R``) reduction in sector ``l``.

    ``initial`` is a :class:`RadialFunction` or a callable of ``r``. Without a
    grid one is built on ``(delta, r_out)``. ``n_steps`` Crank--Nicolson steps
    are taken (the first two replaced by four implicit Euler half steps).

    Raises
    ------
    DomainError
        If the grid starts inside ``r < delta``.
    StepRejection
        If positivity of nonnegative data cannot be kept.
    """
    if not tau > 0:
        raise ValueError("tau must be > 0")
    p = bg.params
    a = p.bohr_radius
    delta = DEFAULT_DELTA * a if delta is None else delta
    if grid is None:
        grid = RadialGrid.spanning(delta, r_out or 30.0 * a, h or 0.005 * a)
    if grid.r_lo < delta * (1 - 1e-12):
        raise DomainError(f"grid starts at r = {grid.r_lo} inside the excluded ball r < {delta}")
    u0 = initial.u if isinstance(initial, RadialFunction) else np.asarray(initial(grid.r), dtype=float)
    H = radial_hamiltonian(bg, l, grid)
    states, _ = _propagate_checked(H, u0, [tau], 1.0 / n_steps)
    return RadialFunction(grid, states[-1])


def _gaussians(grid: RadialGrid, r0: float, widths):
    r = grid.r[:, None]
    s = np.asarray(widths)[None, :]
    return np.exp(-((r - r0) ** 2) / (2 * s**2)) / (math.sqrt(2 * math.pi) * s)


def _probe_grid(bg, r_probe, tau_max, delta, h):
    p = bg.params
    width = math.sqrt(p.hbar**2 * tau_max / p.m)
    r_hi = r_probe + 2 * ISOLATION * width + 0.5 * p.bohr_radius
    return RadialGrid.spanning(delta, r_hi, h, anchor=r_probe)


def _width_ladder(params, tau_min):
    s0 = 0.15 * math.sqrt(params.hbar**2 * tau_min / params.m)
    return np.array([s0, s0 / math.sqrt(2), s0 / 2])


def _sector_diagonals(bg, l, grid, r_probe, taus, widths, rel_step):
    H = radial_hamiltonian(bg, l, grid)
    j = grid.index(r_probe)
    states, cascade = _propagate_checked(H, _gaussians(grid, r_probe, widths), list(taus), rel_step)
    return np.array([s[j, :] for s in states]), cascade  # (n_tau, n_width)


def _diagonal_series(bg, r_probe, taus, delta=None, h=None, l_max=L_START, tol=1e-9):
    """Width-extrapolated 3-D diagonal at each tau, with bookkeeping."""
    p = bg.params
    a = p.bohr_radius
    delta = DEFAULT_DELTA * a if delta is None else delta
    taus = np.sort(np.asarray(taus, dtype=float))
    if r_probe <= delta:
        raise DomainError(f"probe r = {r_probe} inside the excluded ball r <= {delta}")
    widths = _width_ladder(p, taus[0])
    h = h or min(widths[-1] / 3.0, 0.005 * a)
    grid = _probe_grid(bg, r_probe, taus[-1], delta, h)
    total = np.zeros((taus.size, widths.size))
    l, L, prev, cascades = 0, l_max, None, []
    while True:
        tail_done = False
        while l <= L:
            d, cas = _sector_diagonals(bg, l, grid, r_probe, taus, widths, REL_STEP)
            cascades += cas
            term = (2 * l + 1) * d / (4 * math.pi * r_probe**2)
            total += term
            l += 1
            # past the peak the terms fall off like a Gaussian in l
            if l > L_START and np.all(np.abs(term) <= 1e-3 * tol * np.abs(total)):
                tail_done = True
                break
        if tail_done or (prev is not None and np.all(np.abs(total - prev) <= tol * np.abs(total))):
            break
        if 2 * L > L_CAP:
            raise RuntimeError(f"l-sum not converged by l = {L}")
        prev = total.copy()
        L *= 2
    steps = widths**2
    diag = np.empty(taus.size)
    werr = np.empty(taus.size)
    for i in range(taus.size):
        diag[i], werr[i] = richardson(list(zip(steps, total[i])), order=1)
    unit = p.hbar**2 / p.m
    reach = r_probe - delta
    tail = math.exp(-(reach**2) / (2 * unit * taus[-1]))
    info = {"l_used": l - 1, "grid_step": grid.h, "r_out": grid.r_hi, "delta": delta,
            "widths": widths.tolist(), "width_error": werr.tolist(), "wall_tail": tail,
            "step_rejections": cascades, "rel_step": REL_STEP}
    return diag, info


def free_diagonal(params, tau):
    """``(m / (2 pi hbar^2 tau))^(3/2)``."""
    return (params.m / (2 * math.pi * params.hbar**2 * np.asarray(tau, dtype=float))) ** 1.5


@dataclass(frozen=True)
class HeatKernelSample:
    tau: float
    diagonal_value: float
    probe: float
    off_diagonal: tuple | None = None  # (r', value)
    info: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be > 0")
        if not self.diagonal_value > 0:
            raise ValueError("diagonal kernel must be positive")

    @property
    def rescaled(self) -> float:
        """``K(tau; x, x) (2 pi hbar^2 tau/m)^(3/2)`` in the units the sample was made with."""
        return self.info.get("rescaled", float("nan"))


def _probe_radius(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.linalg.norm(x)) if x.ndim else float(x)


def diagonal_kernel(bg: StaticBackground, x, tau: float, delta: float | None = None,
                    tol: float = 1e-6) -> HeatKernelSample:
    """``K(tau; x, x)`` at a probe point (3-vector or radius).

    Raises
    ------
    DomainError
        Probe inside the excluded ball.
    BoundaryContamination
        Gaussian tail of the kernel at the nearest wall above ``tol``.
    """
    p = bg.params
    r = _probe_radius(x)
    delta = DEFAULT_DELTA * p.bohr_radius if delta is None else delta
    diag, info = _diagonal_series(bg, r, [tau], delta=delta)
    if info["wall_tail"] > tol:
        raise BoundaryContamination(f"wall tail {info['wall_tail']:.3g} exceeds {tol:.3g}")
    info["rescaled"] = float(diag[0] / free_diagonal(p, tau))
    return HeatKernelSample(float(tau), float(diag[0]), r, None, info)


def radial_kernel(bg: StaticBackground, l: int, tau: float, r: float, r_prime: float,
                  grid: RadialGrid | None = None, delta: float | None = None) -> float:
    """Sector kernel ``k_l(tau; r, r')`` from a width-extrapolated source at ``r'``."""
    p = bg.params
    a = p.bohr_radius
    delta = DEFAULT_DELTA * a if delta is None else delta
    if min(r, r_prime) <= delta:
        raise DomainError("points must lie outside the excluded ball")
    widths = _width_ladder(p, tau)
    if grid is None:
        h = min(widths[-1] / 3.0, 0.005 * a)
        lo_anchor = min(r, r_prime)
        grid = _probe_grid(bg, max(r, r_prime), tau, delta, h)
        grid = RadialGrid.spanning(delta, grid.r_hi, grid.h, anchor=lo_anchor)
        grid = RadialGrid(grid.r_lo, grid.h, grid.n)
    H = radial_hamiltonian(bg, l, grid)
    j = int(np.argmin(np.abs(grid.r - r)))
    src = grid.r[int(np.argmin(np.abs(grid.r - r_prime)))]
    states, _ = _propagate_checked(H, _gaussians(grid, src, widths), [tau], REL_STEP)
    vals = states[-1][j, :]
    value, _ = richardson(list(zip(widths**2, vals)), order=1)
    return float(value)


@dataclass(frozen=True)
class HadamardFit:
    probe: float
    a0: float
    a1: float
    a2: float
    sigma: tuple  # jackknife standard errors of (a0, a1, a2)
    tau_grid: tuple
    rescaled: tuple
    residual: float
    valid: bool
    reasons: tuple = ()
    info: dict = field(default_factory=dict, compare=False, repr=False)

    def to_dict(self) -> dict:
        return {"probe": self.probe, "a0": self.a0, "a1": self.a1, "a2": self.a2,
                "sigma": list(self.sigma), "tau_grid": list(self.tau_grid), "rescaled": list(self.rescaled),
                "residual": self.residual, "valid": self.valid, "reasons": list(self.reasons),
                "l_used": self.info.get("l_used"), "grid_step": self.info.get("grid_step"),
                "delta": self.info.get("delta")}


def _quadfit(t, y):
    A = np.vstack([np.ones_like(t), t, t**2]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return coef, float(np.max(np.abs(A @ coef - y)))


def _jackknife(t, y):
    n = t.size
    reps = np.array([_quadfit(np.delete(t, i), np.delete(y, i))[0] for i in range(n)])
    mean = reps.mean(axis=0)
    return np.sqrt((n - 1) / n * np.sum((reps - mean) ** 2, axis=0))


def fit_hadamard(bg: StaticBackground, x, tau_grid=None, delta: float | None = None,
                 band: float = 1e-3) -> HadamardFit:
    """Fit ``K (2 pi hbar^2 tau/m)^(3/2) = a0 + a1 tau + a2 tau^2`` at a probe point.

    The validity flag is false (and coefficients NaN) for probes inside the
    excluded ball; it is also false when the probe is closer than
    five kernel widths to the inner wall at the largest tau, when
    ``tau_max |V|`` exceeds one half, or when the fit residual exceeds
    ``band``.
    """
    p = bg.params
    r = _probe_radius(x)
    a = p.bohr_radius
    delta = DEFAULT_DELTA * a if delta is None else delta
    taus = np.sort(np.asarray(tau_grid if tau_grid is not None else default_tau_grid(p, r, delta), dtype=float))
    if taus.size < 6:
        raise FitError("tau grid needs at least six points")
    ratios = taus[1:] / taus[:-1]
    if not np.allclose(ratios, ratios[0], rtol=1e-6):
        raise FitError("tau grid must be geometric")
    nan = float("nan")
    if r <= delta:
        return HadamardFit(r, nan, nan, nan, (nan, nan, nan), tuple(taus), (), nan, False,
                           ("probe inside the excluded ball",))
    reasons = []
    width = math.sqrt(p.hbar**2 * taus[-1] / p.m)
    if r - delta < ISOLATION * width:
        reasons.append("probe within five kernel widths of the inner wall")
    if taus[-1] * abs(float(bg.potential(r))) > 0.5:
        reasons.append("tau_max |V| > 1/2: outside the short-time window")
    diag, info = _diagonal_series(bg, r, taus, delta=delta)
    y = diag / free_diagonal(p, taus)
    coef, resid = _quadfit(taus, y)
    sig = _jackknife(taus, y)
    if resid > band:
        reasons.append(f"fit residual {resid:.3g} above band {band:.3g}")
    if np.any(diag <= 0):
        reasons.append("nonpositive diagonal sample")
    return HadamardFit(r, float(coef[0]), float(coef[1]), float(coef[2]), tuple(float(s) for s in sig),
                       tuple(taus), tuple(float(v) for v in y), resid, not reasons, tuple(reasons), info)
