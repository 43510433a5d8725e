"""
Gaussian test functions and the momentum-space pairing quadrature.

Fourier convention (fixed here, used everywhere)::

    f~(omega, k) = \\int dt d^3x  f(t, x) exp(+i omega t - i k.x)

A test function is

    f(t, x) = A exp(-(t-t0)^2 / 2 sigma_t^2) exp(-|x-x0|^2 / 2 sigma_x^2)
                exp(-i omega0 (t-t0) + i k0.(x-x0))

so that ``f~`` peaks at ``(omega0, k0)``. Spatial test functions drop the
time factor.

Every momentum profile the package integrates has the form
``R(|k|) exp(-s |k|^2 / 2 + k.b)`` with complex ``b``; for such pairs the
angular integral is closed-form and the radial scheme is one-dimensional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from numpy.polynomial.legendre import leggauss

from .kinematics import PhysicalParams

__all__ = [
    "TestFunction",
    "GaussianProfile",
    "MomentumGrid",
    "QuadratureNodes",
    "QuadResult",
    "QuadratureError",
    "fourier",
    "pair_integral",
    "random_gaussian",
    "radial_gaussian_pair",
    "spatial_gaussian",
    "spacetime_gaussian",
]

TWO_PI = 2.0 * math.pi
KINDS = ("spacetime", "spatial")
SCHEMES = ("radial-gauss-legendre", "cartesian-tensor")


class QuadratureError(RuntimeError):
    """Estimated quadrature error exceeds the requested tolerance."""


def _vec3(v) -> tuple:
    a = np.asarray(v, dtype=float).reshape(-1)
    if a.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {a.shape}")
    return tuple(float(x) for x in a)


@dataclass(frozen=True)
class TestFunction:
    """Gaussian wave packet on spacetime or space."""

    __test__ = False  # keep pytest from collecting this class

    kind: str = "spatial"
    t0: float = 0.0
    x0: tuple = (0.0, 0.0, 0.0)
    sigma_t: float = 1.0
    sigma_x: float = 1.0
    omega0: float = 0.0
    k0: tuple = (0.0, 0.0, 0.0)
    amplitude: complex = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        object.__setattr__(self, "x0", _vec3(self.x0))
        object.__setattr__(self, "k0", _vec3(self.k0))
        object.__setattr__(self, "amplitude", complex(self.amplitude))
        if not self.sigma_x > 0:
            raise ValueError("sigma_x must be > 0")
        if self.kind == "spacetime" and not self.sigma_t > 0:
            raise ValueError("sigma_t must be > 0 for spacetime test functions")

    # -- position space ---------------------------------------------------
    def evaluate(self, x, t=None):
        """Position-space value; ``x`` has shape (..., 3)."""
        x = np.asarray(x, dtype=float)
        dx = x - np.array(self.x0)
        val = self.amplitude * np.exp(-np.sum(dx**2, axis=-1) / (2 * self.sigma_x**2)
                                      + 1j * dx @ np.array(self.k0))
        if self.kind == "spacetime":
            if t is None:
                raise ValueError("spacetime test function needs t")
            dt = np.asarray(t, dtype=float) - self.t0
            val = val * np.exp(-dt**2 / (2 * self.sigma_t**2) - 1j * self.omega0 * dt)
        return val

    def l2_norm(self) -> float:
        """sqrt of \\int |f|^2 over space (and time, for spacetime kind)."""
        n2 = abs(self.amplitude) ** 2 * (math.pi * self.sigma_x**2) ** 1.5
        if self.kind == "spacetime":
            n2 *= math.sqrt(math.pi) * self.sigma_t
        return math.sqrt(n2)

    def normalized(self) -> "TestFunction":
        return replace(self, amplitude=self.amplitude / self.l2_norm())

    def scaled(self, factor: complex) -> "TestFunction":
        return replace(self, amplitude=self.amplitude * factor)

    # -- Fourier space ----------------------------------------------------
    def time_fourier(self, omega):
        """Time factor of the transform (1 for spatial kind)."""
        omega = np.asarray(omega, dtype=float)
        if self.kind == "spatial":
            return np.ones_like(omega, dtype=complex)
        return (math.sqrt(TWO_PI) * self.sigma_t
                * np.exp(1j * omega * self.t0 - 0.5 * self.sigma_t**2 * (omega - self.omega0) ** 2))

    def spatial_fourier(self, k):
        """Spatial transform including the amplitude; ``k`` has shape (..., 3)."""
        k = np.asarray(k, dtype=float)
        dk = k - np.array(self.k0)
        return (self.amplitude * (TWO_PI * self.sigma_x**2) ** 1.5
                * np.exp(-0.5 * self.sigma_x**2 * np.sum(dk**2, axis=-1) - 1j * k @ np.array(self.x0)))

    def fourier(self, omega, k):
        return self.time_fourier(omega) * self.spatial_fourier(k)

    def profile(self, energy: Callable | None = None, prefactor: Callable | None = None) -> "GaussianProfile":
        """Momentum profile ``k -> prefactor(|k|) f~(energy(|k|), k)``.

        For spatial kind ``energy`` is ignored.
        """
        s = self.sigma_x**2
        k0 = np.array(self.k0)
        const = self.amplitude * (TWO_PI * s) ** 1.5 * math.exp(-0.5 * s * float(k0 @ k0))
        b = s * k0 - 1j * np.array(self.x0)
        tf = self

        def radial(kabs):
            kabs = np.asarray(kabs, dtype=float)
            out = np.full(kabs.shape, const, dtype=complex)
            if tf.kind == "spacetime":
                if energy is None:
                    raise ValueError("spacetime profile needs an energy function")
                out = out * tf.time_fourier(energy(kabs))
            if prefactor is not None:
                out = out * prefactor(kabs)
            return out

        return GaussianProfile(radial=radial, width2=s, linear=tuple(b))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "center": [self.t0, list(self.x0)],
            "widths": [self.sigma_t, self.sigma_x],
            "carrier": [self.omega0, list(self.k0)],
            "amplitude": [self.amplitude.real, self.amplitude.imag],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TestFunction":
        t0, x0 = d.get("center", [0.0, [0, 0, 0]])
        sigma_t, sigma_x = d.get("widths", [1.0, 1.0])
        omega0, k0 = d.get("carrier", [0.0, [0, 0, 0]])
        amp = d.get("amplitude", [1.0, 0.0])
        amp = complex(amp[0], amp[1]) if isinstance(amp, (list, tuple)) else complex(amp)
        return cls(kind=d["kind"], t0=t0, x0=x0, sigma_t=sigma_t, sigma_x=sigma_x,
                   omega0=omega0, k0=k0, amplitude=amp)

    def k_extent(self, params: PhysicalParams | None = None) -> float:
        """Default cutoff: |k0| + max(8/sigma_x, 8 sqrt(m |omega0| / hbar))."""
        kx = 8.0 / self.sigma_x
        if params is not None and self.kind == "spacetime":
            kx = max(kx, 8.0 * math.sqrt(params.m * abs(self.omega0) / params.hbar))
        return float(np.linalg.norm(self.k0)) + kx


def spatial_gaussian(x0=(0, 0, 0), sigma=1.0, k0=(0, 0, 0), amplitude=1.0, normalize=False) -> TestFunction:
    f = TestFunction("spatial", x0=x0, sigma_x=sigma, k0=k0, amplitude=amplitude)
    return f.normalized() if normalize else f


def spacetime_gaussian(t0=0.0, x0=(0, 0, 0), sigma_t=1.0, sigma_x=1.0, omega0=0.0, k0=(0, 0, 0),
                       amplitude=1.0) -> TestFunction:
    return TestFunction("spacetime", t0=t0, x0=x0, sigma_t=sigma_t, sigma_x=sigma_x,
                        omega0=omega0, k0=k0, amplitude=amplitude)


def random_gaussian(rng: np.random.Generator, kind: str = "spacetime", spread: float = 1.0) -> TestFunction:
    """A random packet: centre in ``[-spread, spread]``, widths in ``[0.6, 1.5]``,
    carriers ``|k0_i|, |omega0| <= 0.5`` and a unit-modulus random-phase amplitude."""
    x0 = rng.uniform(-spread, spread, 3)
    k0 = rng.uniform(-0.5, 0.5, 3)
    amp = np.exp(1j * rng.uniform(0, TWO_PI))
    if kind == "spatial":
        return spatial_gaussian(x0=x0, sigma=rng.uniform(0.6, 1.5), k0=k0, amplitude=amp)
    return spacetime_gaussian(t0=rng.uniform(-spread, spread), x0=x0, sigma_t=rng.uniform(0.6, 1.5),
                              sigma_x=rng.uniform(0.6, 1.5), omega0=rng.uniform(-0.5, 0.5), k0=k0,
                              amplitude=amp)


def fourier(f: TestFunction, omega, k):
    return f.fourier(omega, k)


@dataclass(frozen=True)
class GaussianProfile:
    """``k -> radial(|k|) * exp(-width2 |k|^2 / 2 + k.linear)``."""

    radial: Callable
    width2: float
    linear: tuple  # complex 3-vector

    def __call__(self, k):
        k = np.asarray(k, dtype=float)
        kabs = np.sqrt(np.sum(k**2, axis=-1))
        b = np.array(self.linear, dtype=complex)
        return self.radial(kabs) * np.exp(-0.5 * self.width2 * kabs**2 + k @ b)

    def conj_linear(self) -> np.ndarray:
        return np.conj(np.array(self.linear, dtype=complex))


@dataclass(frozen=True)
class QuadratureNodes:
    """Nodes ``k_i`` with weights ``w_i`` approximating \\int d^3k/(2pi)^3."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3 or w.shape != (pts.shape[0],):
            raise ValueError("points must be (N, 3) and weights (N,)")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return self.weights.size

    @property
    def kabs(self) -> np.ndarray:
        return np.sqrt(np.sum(self.points**2, axis=1))

    def same_as(self, other: "QuadratureNodes") -> bool:
        return self is other or (self.size == other.size
                                 and np.array_equal(self.points, other.points)
                                 and np.array_equal(self.weights, other.weights))


def _gl(n, a, b):
    x, w = leggauss(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


@dataclass(frozen=True)
class MomentumGrid:
    """Discretisation of \\int d^3k/(2pi)^3 up to ``k_max``.

    ``n_points`` is the radial node count (radial scheme) or the per-axis
    count (cartesian scheme).
    """

    k_max: float
    n_points: int = 256
    scheme: str = "radial-gauss-legendre"

    def __post_init__(self):
        if not self.k_max > 0:
            raise ValueError("k_max must be > 0")
        if self.n_points < 16:
            raise ValueError("n_points must be >= 16")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")

    @classmethod
    def for_functions(cls, *fs: TestFunction, params: PhysicalParams | None = None, n_points: int = 256,
                      scheme: str = "radial-gauss-legendre") -> "MomentumGrid":
        return cls(max(f.k_extent(params) for f in fs), n_points, scheme)

    def refined(self) -> "MomentumGrid":
        return replace(self, n_points=2 * self.n_points)

    def radial_nodes(self):
        return _gl(self.n_points, 0.0, self.k_max)

    def nodes(self, n_angular: int | None = None) -> QuadratureNodes:
        """Full 3-D nodes: spherical product (radial) or tensor (cartesian)."""
        if self.scheme == "cartesian-tensor":
            x, w = _gl(self.n_points, -self.k_max, self.k_max)
            X, Y, Z = np.meshgrid(x, x, x, indexing="ij")
            W = w[:, None, None] * w[None, :, None] * w[None, None, :]
            pts = np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=1)
            return QuadratureNodes(pts, W.ravel() / TWO_PI**3)
        nth = n_angular or max(16, self.n_points // 4)
        r, wr = self.radial_nodes()
        ct, wct = leggauss(nth)
        nph = 2 * nth
        ph = TWO_PI * np.arange(nph) / nph
        wph = np.full(nph, TWO_PI / nph)
        R, CT, PH = np.meshgrid(r, ct, ph, indexing="ij")
        ST = np.sqrt(1.0 - CT**2)
        pts = np.stack([R * ST * np.cos(PH), R * ST * np.sin(PH), R * CT], axis=-1).reshape(-1, 3)
        W = (wr * r**2)[:, None, None] * wct[None, :, None] * wph[None, None, :]
        return QuadratureNodes(pts, W.ravel() / TWO_PI**3)


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float


def _sinhc(z):
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-3
    zs = np.where(small, 1.0, z)
    return np.where(small, 1.0 + z**2 / 6.0 + z**4 / 120.0, np.sinh(zs) / zs)


def radial_gaussian_pair(grid: MomentumGrid, radial_product, width2: float, linear, weight=None):
    """1-D radial form of \\int d^3k/(2pi)^3 w(|k|) P(|k|) exp(-width2 |k|^2/2 + k.b).

    The angular integral of ``exp(k.b)`` is ``4 pi sinh(|k| beta)/(|k| beta)``
    with ``beta^2 = b.b`` (bilinear). Returns ``(value, tail_estimate)``.
    """
    k, w = grid.radial_nodes()
    b = np.asarray(linear, dtype=complex)
    beta = np.sqrt(np.sum(b * b))  # sinhc is even, so the branch is irrelevant

    def integrand(kk):
        val = radial_product(kk) * np.exp(-0.5 * width2 * kk**2) * _sinhc(kk * beta) * kk**2
        if weight is not None:
            val = val * weight(kk)
        return val

    value = np.sum(w * integrand(k)) / (2.0 * math.pi**2)
    edge = abs(integrand(np.array([grid.k_max]))[0]) / (2.0 * math.pi**2)
    tail = edge / (width2 * grid.k_max) if width2 > 0 else float("inf")
    return complex(value), float(tail)


def _radial_pair(grid: MomentumGrid, weight, fp: GaussianProfile, gp: GaussianProfile):
    return radial_gaussian_pair(
        grid, lambda kk: fp.radial(kk) * np.conj(gp.radial(kk)), fp.width2 + gp.width2,
        np.array(fp.linear, dtype=complex) + gp.conj_linear(), weight)


def _nodes_pair(nodes: QuadratureNodes, weight, f, g):
    vals = f(nodes.points) * np.conj(g(nodes.points))
    if weight is not None:
        vals = vals * weight(nodes.kabs)
    return complex(np.sum(nodes.weights * vals))


def pair_integral(grid, weight, f, g, tol: float = 1e-9) -> QuadResult:
    """\\int d^3k/(2pi)^3 weight(|k|) f(k) conj(g(k)).

    Parameters
    ----------
    grid : MomentumGrid or QuadratureNodes
    weight : callable of |k| or None (meaning 1)
    f, g : GaussianProfile, TestFunction (spatial) or callable on (..., 3) arrays
    tol : float
        Absolute error budget; ``QuadratureError`` is raised when the
        node-doubling difference plus the cutoff tail exceeds it.
    """
    if isinstance(f, TestFunction):
        f = f.profile()
    if isinstance(g, TestFunction):
        g = g.profile()
    if isinstance(grid, QuadratureNodes):
        return QuadResult(_nodes_pair(grid, weight, f, g), 0.0)
    if grid.scheme == "radial-gauss-legendre" and isinstance(f, GaussianProfile) and isinstance(g, GaussianProfile):
        v1, tail = _radial_pair(grid, weight, f, g)
        v2, _ = _radial_pair(grid.refined(), weight, f, g)
        err = abs(v2 - v1) + tail
        value = v2
    else:
        v1 = _nodes_pair(grid.nodes(), weight, f, g)
        v2 = _nodes_pair(grid.refined().nodes(), weight, f, g)
        err = abs(v2 - v1)
        value = v2
    if not err <= tol:
        raise QuadratureError(f"estimated quadrature error {err:.3g} exceeds tolerance {tol:.3g}")
    return QuadResult(value, float(err))
