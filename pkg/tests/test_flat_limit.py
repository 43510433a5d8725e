import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nclimit.flat_limit import (ccr_deficit, coefficient_F, equal_time_ccr, schrodinger_kernel, wightman_difference,
                                wightman_flat, wightman_position_space)
from nclimit.kinematics import PhysicalParams, default_c_sweep
from nclimit.reporting import fit_power_law
from nclimit.smearing import random_gaussian, spacetime_gaussian, spatial_gaussian

from test_smearing import overlap_position_space

P = PhysicalParams()
seeds = st.integers(0, 2**32 - 1)
speeds = st.floats(5.0, 1e4)


@given(seeds, speeds)
def test_wightman_hermitian(seed, c):
    rng = np.random.default_rng(seed)
    f, g = random_gaussian(rng), random_gaussian(rng)
    a, b = wightman_flat(P, c, f, g).value, wightman_flat(P, c, g, f).value
    assert abs(a - np.conj(b)) < 1e-12 * max(1.0, abs(a))


@given(seeds, st.one_of(speeds, st.just(math.inf)))
def test_wightman_positive(seed, c):
    f = random_gaussian(np.random.default_rng(seed))
    w = wightman_flat(P, c, f, f).value
    assert w.real >= 0 and abs(w.imag) < 1e-12 * max(1.0, w.real)


def test_limit_matches_position_space():
    rng = np.random.default_rng(7)
    for _ in range(3):
        f, g = random_gaussian(rng), random_gaussian(rng)
        assert abs(wightman_flat(P, math.inf, f, g).value - wightman_position_space(P, f, g)) < 1e-9


def test_schrodinger_kernel_closed_form():
    dt, dx = 0.8, (0.3, -1.1, 0.4)
    want = (1.0 / (2j * math.pi * dt)) ** 1.5 * np.exp(1j * np.dot(dx, dx) / (2 * dt))
    assert abs(schrodinger_kernel(P, dt, dx) - want) < 1e-14
    with pytest.raises(ValueError):
        schrodinger_kernel(P, 0.0, dx)


def test_difference_rate():
    rng = np.random.default_rng(3)
    f, g = random_gaussian(rng), random_gaussian(rng)
    rep = fit_power_law([(c, abs(wightman_difference(P, c, f, g))) for c in default_c_sweep()])
    assert abs(rep.fitted_exponent + 2) < 0.1 and rep.r_squared > 0.99


def test_difference_consistent_with_direct():
    f = spacetime_gaussian(x0=(0.3, 0, 0), omega0=0.2, k0=(0.1, 0, 0))
    g = spacetime_gaussian(t0=0.5, sigma_x=1.2)
    d = wightman_difference(P, 10.0, f, g)
    direct = wightman_flat(P, 10.0, f, g).value - wightman_flat(P, math.inf, f, g).value
    assert abs(d - direct) < 1e-10


def test_coefficient_converges_pointwise():
    f = spacetime_gaussian(omega0=0.2, k0=(0.3, 0, 0))
    k = np.array([[0.7, -0.2, 0.4]])
    rep = fit_power_law([(c, abs(coefficient_F(P, c, f, k) - coefficient_F(P, math.inf, f, k))[0])
                         for c in default_c_sweep()])
    assert abs(rep.fitted_exponent + 2) < 0.05


@given(seeds)
def test_ccr_limit_is_overlap(seed):
    rng = np.random.default_rng(seed)
    g1, g2 = random_gaussian(rng, "spatial"), random_gaussian(rng, "spatial")
    assert abs(equal_time_ccr(P, math.inf, g1, g2).value - overlap_position_space(g1, g2)) < 1e-9


def test_ccr_deficit_leading_term():
    # unit-norm Gaussian, k0 = 0: deficit ~ <k^2>/(2 m^2 c^2) = 3/(4 sigma^2 c^2)
    g = spatial_gaussian(sigma=1.3, normalize=True)
    c = 1e3
    assert ccr_deficit(P, c, g) * c**2 == pytest.approx(3 / (4 * 1.3**2), rel=1e-5)


def test_kind_checks():
    with pytest.raises(ValueError):
        wightman_flat(P, 10.0, spatial_gaussian(), spatial_gaussian())
    with pytest.raises(ValueError):
        equal_time_ccr(P, 10.0, spacetime_gaussian(), spatial_gaussian())
