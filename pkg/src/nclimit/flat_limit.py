"""
Smeared two-point functions of the rescaled Klein--Gordon field on
Minkowski space at finite c, their Galilean limits, and the equal-time
commutator.

Correlators are always smeared pairings; ``c = math.inf`` selects the
limiting (free Schrodinger) coefficients. Pairings are linear in the first
test function and antilinear in the second.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .kinematics import Dispersion, PhysicalParams
from .smearing import GaussianProfile, MomentumGrid, TestFunction, pair_integral, radial_gaussian_pair

__all__ = [
    "SmearedCorrelator",
    "coefficient_F",
    "coefficient_profile",
    "wightman_flat",
    "wightman_difference",
    "schrodinger_kernel",
    "wightman_position_space",
    "equal_time_ccr",
    "ccr_deficit",
    "max_carrier_frequency",
]


@dataclass(frozen=True)
class SmearedCorrelator:
    value: complex
    quadrature_error: float
    c_used: float  # math.inf for the limit

    def __post_init__(self):
        if not (math.isfinite(self.value.real) and math.isfinite(self.value.imag)):
            raise ValueError("correlator value is not finite")
        if not (self.quadrature_error >= 0 and math.isfinite(self.quadrature_error)):
            raise ValueError("quadrature error must be finite and >= 0")


def _require(f: TestFunction, kind: str):
    if f.kind != kind:
        raise ValueError(f"expected a {kind} test function, got {f.kind}")


def max_carrier_frequency(params: PhysicalParams, c_min: float) -> float:
    """Largest carrier |omega0| kept inside the positive-frequency regime: 0.1 m c^2/hbar."""
    return 0.1 * params.m * c_min**2 / params.hbar


def coefficient_profile(params: PhysicalParams, c: float, f: TestFunction) -> GaussianProfile:
    """The mode coefficient ``F(k)`` as a Gaussian momentum profile."""
    _require(f, "spacetime")
    d = Dispersion(params, c)
    if math.isinf(c):
        return f.profile(energy=d.omega_stripped)
    return f.profile(energy=d.omega_stripped, prefactor=d.amplitude_prefactor)


def coefficient_F(params: PhysicalParams, c: float, f: TestFunction, k):
    """``sqrt(m c^2/(hbar omega_c(k))) f~(omega_c(k) - m c^2/hbar, k)``.

    At ``c = inf`` this is ``f~(hbar k^2/2m, k)``. ``k`` has shape (..., 3).
    """
    return coefficient_profile(params, c, f)(k)


def _grid_for(params, *fs, grid=None):
    return grid or MomentumGrid.for_functions(*fs, params=params)


def wightman_flat(params: PhysicalParams, c: float, f: TestFunction, g: TestFunction,
                  grid: MomentumGrid | None = None, tol: float = 1e-9) -> SmearedCorrelator:
    """Smeared two-point function ``\\int d^3k/(2pi)^3 F_f(k) conj(F_g(k))``."""
    _require(f, "spacetime")
    _require(g, "spacetime")
    grid = _grid_for(params, f, g, grid=grid)
    r = pair_integral(grid, None, coefficient_profile(params, c, f), coefficient_profile(params, c, g), tol=tol)
    return SmearedCorrelator(r.value, r.error, float(c))


def wightman_difference(params: PhysicalParams, c: float, f: TestFunction, g: TestFunction,
                        grid: MomentumGrid | None = None) -> complex:
    """``W^(c)(f, g) - W^(inf)(f, g)`` evaluated on shared radial nodes.

    Differencing under the integral keeps the small-difference regime (large
    c) free of the cancellation a difference of two quadratures would suffer
    only at the integrand level, where it is harmless.
    """
    grid = _grid_for(params, f, g, grid=grid).refined()
    Fc, Gc = coefficient_profile(params, c, f), coefficient_profile(params, c, g)
    Fi, Gi = coefficient_profile(params, math.inf, f), coefficient_profile(params, math.inf, g)

    def radial_diff(kk):
        return Fc.radial(kk) * np.conj(Gc.radial(kk)) - Fi.radial(kk) * np.conj(Gi.radial(kk))

    value, _ = radial_gaussian_pair(grid, radial_diff, Fc.width2 + Gc.width2,
                                    np.array(Fc.linear, dtype=complex) + Gc.conj_linear())
    return value


def schrodinger_kernel(params: PhysicalParams, dt: float, dx) -> complex:
    """Free Schrodinger propagator ``(m/(2 pi i hbar dt))^(3/2) exp(i m |dx|^2/(2 hbar dt))``.

    The branch is fixed by continuity from ``dt -> 0+``: ``(1/i)^(3/2) = exp(-3 i pi/4)``.
    """
    if not dt > 0:
        raise ValueError("dt must be > 0")
    dx = np.asarray(dx, dtype=float)
    r2 = float(dx @ dx)
    mod = (params.m / (2 * math.pi * params.hbar * dt)) ** 1.5
    return mod * cmath.exp(-0.75j * math.pi) * cmath.exp(1j * params.m * r2 / (2 * params.hbar * dt))


def _evolved_overlap_1d(params, s_a, x_a, k_a, s_b, x_b, k_b, delta):
    """\\int dx dx' a(x) conj(b(x')) K1(delta, x' - x) for 1-D Gaussians.

    ``a`` is propagated by the free 1-D Schrodinger kernel for time ``delta``
    (any sign) in position space, then overlapped with ``b``. Everything is a
    Gaussian integral with Re(width) > 0, so principal square roots apply.
    """
    hb, m = params.hbar, params.m
    delta = np.asarray(delta, dtype=float)
    w = s_a**2 + 1j * hb * delta / m  # complex width^2 of the evolved packet
    pref = np.sqrt(s_a**2 / w)
    # evolved a(x) = pref * exp(-(x - xc)^2/(2w) + i k_a (x - x_a) - i hb k_a^2 delta/(2m))
    xc = x_a + hb * k_a * delta / m
    # product with conj(b(x)) = exp(-(x-x_b)^2/(2 s_b^2) - i k_b (x - x_b))
    alpha = 1.0 / (2 * w) + 1.0 / (2 * s_b**2)
    beta = xc / w + x_b / s_b**2 + 1j * (k_a - k_b)
    gamma = (-xc**2 / (2 * w) - x_b**2 / (2 * s_b**2) - 1j * k_a * x_a + 1j * k_b * x_b
             - 1j * hb * k_a**2 * delta / (2 * m))
    return pref * np.sqrt(np.pi / alpha) * np.exp(beta**2 / (4 * alpha) + gamma)


def wightman_position_space(params: PhysicalParams, f: TestFunction, g: TestFunction, n_nodes: int = 400) -> complex:
    """Limit Wightman pairing from the position-space propagator.

    ``W(f, g) = \\int f(t, x) conj(g(t', x')) K(t' - t, x' - x)``: the spatial
    part of ``f`` is propagated with the free kernel in position space, the
    time integrals reduce to one over ``delta = t' - t`` done by
    Gauss--Legendre. Independent of the momentum-space route.
    """
    _require(f, "spacetime")
    _require(g, "spacetime")
    sa, sb = f.sigma_t, g.sigma_t
    span = 12.0 * math.hypot(sa, sb)
    center = g.t0 - f.t0
    x, w = leggauss(n_nodes)
    delta = center + span * x
    wd = span * w
    # C(delta) = \int dt T_f(t) conj(T_g(t + delta)) with T(t) = exp(-(t-t0)^2/2s^2 - i w0 (t - t0))
    A = 1 / (2 * sa**2) + 1 / (2 * sb**2)
    # exponent: -(t-tf)^2/2sa^2 - (t+delta-tg)^2/2sb^2 - i wf (t-tf) + i wg (t+delta-tg)
    B = f.t0 / sa**2 + (g.t0 - delta) / sb**2 + 1j * (g.omega0 - f.omega0)
    Cc = (-f.t0**2 / (2 * sa**2) - (g.t0 - delta) ** 2 / (2 * sb**2) + 1j * f.omega0 * f.t0
          + 1j * g.omega0 * (delta - g.t0))
    time_part = np.sqrt(np.pi / A) * np.exp(B**2 / (4 * A) + Cc)
    space = np.ones_like(delta, dtype=complex)
    for i in range(3):
        space = space * _evolved_overlap_1d(params, f.sigma_x, f.x0[i], f.k0[i], g.sigma_x, g.x0[i], g.k0[i], delta)
    return complex(f.amplitude * np.conj(g.amplitude) * np.sum(wd * time_part * space))


def equal_time_ccr(params: PhysicalParams, c: float, g1: TestFunction, g2: TestFunction,
                   grid: MomentumGrid | None = None, tol: float = 1e-9) -> SmearedCorrelator:
    """Smeared equal-time commutator ``\\int d^3k/(2pi)^3 (m c^2/(hbar omega_c)) g1~ conj(g2~)``."""
    _require(g1, "spatial")
    _require(g2, "spatial")
    grid = _grid_for(params, g1, g2, grid=grid)
    weight = None if math.isinf(c) else Dispersion(params, c).rest_ratio
    r = pair_integral(grid, weight, g1, g2, tol=tol)
    return SmearedCorrelator(r.value, r.error, float(c))


def ccr_deficit(params: PhysicalParams, c: float, g: TestFunction, grid: MomentumGrid | None = None) -> float:
    """``<g, g> - [psi(g), psi^+(g)]_c`` with the weight ``1 - m c^2/(hbar omega)`` integrated directly."""
    _require(g, "spatial")
    grid = _grid_for(params, g, grid=grid)

    def weight(k):
        x = (params.hbar * k / (params.m * c)) ** 2
        s = np.sqrt(1.0 + x)
        return x / (s * (1.0 + s))  # 1 - 1/sqrt(1+x), cancellation-free

    return pair_integral(grid, weight, g, g).value.real
