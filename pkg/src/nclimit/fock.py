"""
Truncated bosonic Fock space over sampled one-particle momentum wavefunctions.

A vector is a finite sum of terms ``coef * a^+(g_1) ... a^+(g_n) |0>``; the
one-particle wavefunctions are sampled on a shared set of quadrature nodes
and paired by ``<u, v> = sum_i w_i conj(u_i) v_i``. The smeared field is
``psi(f) = a(F_f)`` with ``F_f`` the mode coefficient of ``f`` at the chosen
c, so ``psi(f) a^+(g_1)...a^+(g_n)|0> = sum_j <F_f, g_j> (term without j)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .flat_limit import coefficient_F
from .kinematics import PhysicalParams
from .reporting import richardson
from .smearing import MomentumGrid, QuadratureNodes, TestFunction, spacetime_gaussian, spatial_gaussian

__all__ = [
    "MAX_PARTICLES",
    "GridMismatch",
    "OneParticleWavefunction",
    "FockVector",
    "BargmannSector",
    "WitnessRecord",
    "permanent",
    "fock_nodes",
    "field_wavefunction",
    "gram_inner",
    "fock_norm",
    "annihilate",
    "apply_annihilator",
    "apply_creator",
    "convergence_vector_norm",
    "nonseparating_witness",
    "bargmann_charge",
    "time_zero_two_point",
]

MAX_PARTICLES = 6


class GridMismatch(ValueError):
    """Wavefunctions sampled on different quadrature nodes were combined."""


def _check_nodes(a: QuadratureNodes, b: QuadratureNodes):
    if not a.same_as(b):
        raise GridMismatch("wavefunctions live on different quadrature nodes")


@dataclass(frozen=True, eq=False)
class OneParticleWavefunction:
    """Momentum-space samples of a one-particle state."""

    nodes: QuadratureNodes
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.shape != (self.nodes.size,):
            raise ValueError(f"expected {self.nodes.size} samples, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "_norm", math.sqrt(float(np.sum(self.nodes.weights * np.abs(s) ** 2))))

    @classmethod
    def from_function(cls, nodes: QuadratureNodes, func) -> "OneParticleWavefunction":
        """Sample ``func`` (acting on (N, 3) momenta) at the nodes."""
        return cls(nodes, func(nodes.points))

    @classmethod
    def from_test_function(cls, nodes: QuadratureNodes, g: TestFunction) -> "OneParticleWavefunction":
        """Spatial transform ``g~(k)`` of a spatial test function."""
        if g.kind != "spatial":
            raise ValueError("one-particle wavefunctions come from spatial test functions")
        return cls(nodes, g.spatial_fourier(nodes.points))

    @property
    def norm(self) -> float:
        return self._norm

    def inner(self, other: "OneParticleWavefunction") -> complex:
        """``<self, other>``, antilinear in ``self``."""
        _check_nodes(self.nodes, other.nodes)
        return complex(np.sum(self.nodes.weights * np.conj(self.samples) * other.samples))

    def __sub__(self, other: "OneParticleWavefunction") -> "OneParticleWavefunction":
        _check_nodes(self.nodes, other.nodes)
        return OneParticleWavefunction(self.nodes, self.samples - other.samples)


def fock_nodes(*fs: TestFunction, params: PhysicalParams | None = None, n_radial: int = 48,
               n_angular: int | None = None, scheme: str = "radial-gauss-legendre") -> QuadratureNodes:
    """Shared quadrature nodes covering the momentum support of ``fs``."""
    return MomentumGrid.for_functions(*fs, params=params, n_points=n_radial, scheme=scheme).nodes(n_angular)


def field_wavefunction(params: PhysicalParams, c: float, f: TestFunction,
                       nodes: QuadratureNodes) -> OneParticleWavefunction:
    """``F_f`` at speed ``c`` (``math.inf`` for the limit) sampled on ``nodes``."""
    return OneParticleWavefunction(nodes, coefficient_F(params, c, f, nodes.points))


@dataclass(frozen=True)
class FockVector:
    """``sum_i coef_i a^+(g_i1) ... a^+(g_in) |0>``; no terms is the zero vector.

    The vacuum is the single term with an empty factor list.
    """

    nodes: QuadratureNodes
    terms: tuple = ()  # ((coef, (OneParticleWavefunction, ...)), ...)

    def __post_init__(self):
        clean = []
        for coef, factors in self.terms:
            factors = tuple(factors)
            for g in factors:
                _check_nodes(self.nodes, g.nodes)
            if len(factors) > MAX_PARTICLES:
                raise ValueError(f"at most {MAX_PARTICLES} particles per term")
            clean.append((complex(coef), factors))
        object.__setattr__(self, "terms", tuple(clean))

    @classmethod
    def vacuum(cls, nodes: QuadratureNodes) -> "FockVector":
        return cls(nodes, ((1.0, ()),))

    @classmethod
    def zero(cls, nodes: QuadratureNodes) -> "FockVector":
        return cls(nodes, ())

    @classmethod
    def created(cls, *gs: OneParticleWavefunction, coef: complex = 1.0) -> "FockVector":
        """``coef * a^+(g_1) ... a^+(g_n) |0>``."""
        if not gs:
            raise ValueError("use FockVector.vacuum for the empty product")
        return cls(gs[0].nodes, ((coef, gs),))

    def __add__(self, other: "FockVector") -> "FockVector":
        _check_nodes(self.nodes, other.nodes)
        return FockVector(self.nodes, self.terms + other.terms)

    def __mul__(self, z: complex) -> "FockVector":
        return FockVector(self.nodes, tuple((z * c, fs) for c, fs in self.terms))

    __rmul__ = __mul__

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + (-1.0) * other

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def particle_numbers(self) -> list:
        return sorted({len(fs) for _, fs in self.terms})

    def sector(self, n: int) -> "FockVector":
        return FockVector(self.nodes, tuple(t for t in self.terms if len(t[1]) == n))


def permanent(a) -> complex:
    """Permanent of a square matrix: direct expansion for n <= 4, Ryser for 5, 6."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("permanent needs a square matrix")
    if n > MAX_PARTICLES:
        raise ValueError(f"permanent size {n} exceeds the cap {MAX_PARTICLES}")
    if n == 0:
        return 1.0 + 0j
    if n <= 4:
        rows = range(n)
        return complex(sum(np.prod(a[rows, p]) for p in itertools.permutations(range(n))))
    # Ryser: perm(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij
    total = 0j
    for mask in range(1, 1 << n):
        cols = [j for j in range(n) if mask >> j & 1]
        total += (-1) ** len(cols) * np.prod(a[:, cols].sum(axis=1))
    return complex((-1) ** n * total)


def _term_pairing(fa, fb) -> complex:
    if len(fa) != len(fb):
        return 0j  # different particle number sectors are orthogonal
    if not fa:
        return 1.0 + 0j
    gram = np.array([[x.inner(y) for y in fb] for x in fa])
    return permanent(gram)


def gram_inner(u: FockVector, v: FockVector) -> complex:
    """``<u, v>`` (antilinear in ``u``) via permanents of one-particle Gram matrices."""
    _check_nodes(u.nodes, v.nodes)
    total = 0j
    for cu, fu in u.terms:
        for cv, fv in v.terms:
            if len(fu) == len(fv):
                total += np.conj(cu) * cv * _term_pairing(fu, fv)
    return complex(total)


def fock_norm(v: FockVector) -> float:
    n2 = gram_inner(v, v).real
    return math.sqrt(max(n2, 0.0))


def annihilate(F: OneParticleWavefunction, v: FockVector) -> FockVector:
    """``a(F) v``: each term becomes ``sum_j <F, g_j> (term with g_j omitted)``."""
    _check_nodes(F.nodes, v.nodes)
    out = []
    for coef, factors in v.terms:
        for j, g in enumerate(factors):
            out.append((coef * F.inner(g), factors[:j] + factors[j + 1:]))
    return FockVector(v.nodes, tuple(out))


def apply_annihilator(params: PhysicalParams, c: float, f: TestFunction, v: FockVector) -> FockVector:
    """``psi^(c)(f) v`` with ``psi(f) = a(F_f)``."""
    return annihilate(field_wavefunction(params, c, f, v.nodes), v)


def apply_creator(params: PhysicalParams, c: float, f: TestFunction, v: FockVector) -> FockVector:
    """``psi^(c)(f)^+ v``: prepend ``a^+(F_f)`` to every term."""
    F = field_wavefunction(params, c, f, v.nodes)
    return FockVector(v.nodes, tuple((coef, (F,) + factors) for coef, factors in v.terms))


def convergence_vector_norm(params: PhysicalParams, c: float, f: TestFunction, v: FockVector) -> float:
    """``||(psi^(c)(f) - psi^(inf)(f)) v||``.

    The annihilator is antilinear in its wavefunction, so the difference is
    ``a(F^(c) - F^(inf)) v``; subtracting coefficients pointwise avoids
    differencing two nearly equal Fock norms.
    """
    if math.isinf(c):
        return 0.0
    dF = field_wavefunction(params, c, f, v.nodes) - field_wavefunction(params, math.inf, f, v.nodes)
    return fock_norm(annihilate(dF, v))


@dataclass(frozen=True)
class BargmannSector:
    """Particle-number sector ``n`` with mass charge ``n m``."""

    n: int
    mass_charge: float

    def __post_init__(self):
        if self.n < 0 or int(self.n) != self.n:
            raise ValueError("particle number must be a nonnegative integer")


def bargmann_charge(v: FockVector, params: PhysicalParams | None = None) -> list:
    """``[(BargmannSector, ||P_n v||^2), ...]`` sorted by ``n``."""
    m = 1.0 if params is None else params.m
    return [(BargmannSector(n, n * m), gram_inner(v.sector(n), v.sector(n)).real)
            for n in v.particle_numbers()]


@dataclass(frozen=True)
class WitnessRecord:
    """A local field operator that kills the vacuum but not the one-particle probes."""

    f_params: dict
    vacuum_norm: float
    certificate: float
    probe_center: tuple

    def to_dict(self) -> dict:
        return {"f_params": self.f_params, "vacuum_norm": self.vacuum_norm,
                "certificate": self.certificate, "probe_center": list(self.probe_center)}


def nonseparating_witness(params: PhysicalParams, f: TestFunction, c: float = math.inf,
                          probes=None, nodes: QuadratureNodes | None = None) -> WitnessRecord:
    """Certify that ``psi(f)`` is nonzero while ``psi(f)|0> = 0``.

    The certificate is ``max_g ||psi(f) a^+(g)|0>|| / ||g||`` over a probe
    family of spatial Gaussians; a probe centred on ``f`` (same width and
    carrier) is always added so the maximum cannot miss ``f``'s support.

    Raises
    ------
    ValueError
        If ``f`` is numerically zero (peak of ``|f~|`` at or below 1e-6).
    """
    if f.kind != "spacetime":
        raise ValueError("the witness needs a spacetime test function")
    peak = abs(f.amplitude) * math.sqrt(2 * math.pi) * f.sigma_t * (2 * math.pi * f.sigma_x**2) ** 1.5
    if not peak > 1e-6:
        raise ValueError("degenerate test function: transform peak below 1e-6")
    matched = spatial_gaussian(x0=f.x0, sigma=f.sigma_x, k0=f.k0)
    probes = list(probes or []) + [matched]
    if nodes is None:
        nodes = fock_nodes(f, *probes, params=params)
    vac_out = apply_annihilator(params, c, f, FockVector.vacuum(nodes))
    vacuum_norm = fock_norm(vac_out)  # zero vector: exactly 0.0
    F = field_wavefunction(params, c, f, nodes)
    best, center = -1.0, None
    for g in probes:
        gw = OneParticleWavefunction.from_test_function(nodes, g)
        val = fock_norm(annihilate(F, FockVector.created(gw))) / gw.norm
        if val > best:
            best, center = val, g.x0
    return WitnessRecord(f.to_dict(), vacuum_norm, best, tuple(center))


def time_zero_two_point(params: PhysicalParams, g1: TestFunction, g2: TestFunction,
                        eps=(0.1, 0.05, 0.025), t0: float = 0.0, c: float = math.inf,
                        nodes: QuadratureNodes | None = None):
    """``<0| psi(chi_e g1) psi(chi_e g2)^+ |0>`` extrapolated to ``e -> 0``.

    ``chi_e`` is a unit-integral Gaussian time window of width ``e``; the
    narrow-window limit is the time-zero pairing ``<g1, g2>``. Returns
    ``(value, richardson_error, raw)`` with ``raw`` the per-width values.
    """
    for g in (g1, g2):
        if g.kind != "spatial":
            raise ValueError("time-zero smearing needs spatial test functions")
    if nodes is None:
        nodes = fock_nodes(g1, g2, params=params)
    raw = []
    for e in eps:
        amp = 1.0 / (math.sqrt(2 * math.pi) * e)

        def lift(g):
            return spacetime_gaussian(t0=t0, x0=g.x0, sigma_t=e, sigma_x=g.sigma_x, k0=g.k0,
                                      amplitude=amp * g.amplitude)

        omega = FockVector.vacuum(nodes)
        state = apply_creator(params, c, lift(g2), omega)
        raw.append((e, gram_inner(omega, apply_annihilator(params, c, lift(g1), state))))
    value, err = richardson(raw, order=2)
    return value, err, raw
