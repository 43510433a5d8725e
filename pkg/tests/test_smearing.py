import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nclimit.smearing import (MomentumGrid, QuadratureError, QuadratureNodes, TestFunction, fourier, pair_integral,
                              random_gaussian, spacetime_gaussian, spatial_gaussian)


def overlap_position_space(f, g):
    """\\int d^3x f(x) conj(g(x)) for two spatial Gaussians, axis by axis."""
    total = f.amplitude * np.conj(g.amplitude)
    for a, b, ka, kb in zip(f.x0, g.x0, f.k0, g.k0):
        alpha = 0.5 / f.sigma_x**2 + 0.5 / g.sigma_x**2
        beta = a / f.sigma_x**2 + b / g.sigma_x**2 + 1j * (ka - kb)
        gamma = -0.5 * a**2 / f.sigma_x**2 - 0.5 * b**2 / g.sigma_x**2 - 1j * (ka * a - kb * b)
        total *= math.sqrt(math.pi / alpha) * cmath.exp(beta**2 / (4 * alpha) + gamma)
    return complex(total)


vec = st.tuples(*[st.floats(-2, 2)] * 3)
spatial = st.builds(lambda x0, s, k0, ph: spatial_gaussian(x0=x0, sigma=s, k0=k0, amplitude=cmath.exp(1j * ph)),
                    vec, st.floats(0.5, 2.0), st.tuples(*[st.floats(-1, 1)] * 3), st.floats(0, 2 * math.pi))


@given(spatial, spatial)
def test_parseval(f, g):
    grid = MomentumGrid.for_functions(f, g)
    r = pair_integral(grid, None, f, g)
    assert abs(r.value - overlap_position_space(f, g)) < 1e-9


@given(spatial)
def test_norm_positive(f):
    r = pair_integral(MomentumGrid.for_functions(f), None, f, f)
    assert r.value.real == pytest.approx(f.l2_norm() ** 2, rel=1e-10)
    assert abs(r.value.imag) < 1e-12


def test_transform_decay():
    f = spacetime_gaussian(sigma_t=0.7, sigma_x=1.3, omega0=0.3, k0=(0.2, 0, 0))
    peak = abs(fourier(f, 0.3, np.array([0.2, 0, 0])))
    far = abs(fourier(f, 0.3 + 6 / 0.7, np.array([0.2 + 6 / 1.3, 0, 0])))
    assert far < 1e-7 * peak


def test_dict_roundtrip():
    f = spacetime_gaussian(t0=0.3, x0=(1, 2, 3), sigma_t=0.5, sigma_x=2.0, omega0=0.1, k0=(0, 1, 0),
                           amplitude=1 - 2j)
    assert TestFunction.from_dict(f.to_dict()) == f


@pytest.mark.parametrize("kw", [dict(kind="spatial", sigma_x=0.0), dict(kind="spacetime", sigma_t=-1.0),
                                dict(kind="temporal")])
def test_invalid_test_functions(kw):
    with pytest.raises(ValueError):
        TestFunction(**kw)


def test_grid_doubling_within_tolerance():
    f, g = spatial_gaussian(sigma=0.8), spatial_gaussian(x0=(0.5, 0, 0), sigma=1.1, k0=(0.3, 0, 0))
    grid = MomentumGrid.for_functions(f, g, n_points=64)
    tol = 1e-9
    r1 = pair_integral(grid, None, f, g, tol=tol)
    r2 = pair_integral(grid.refined(), None, f, g, tol=tol)
    assert abs(r1.value - r2.value) <= tol


def test_cartesian_matches_radial():
    f, g = spatial_gaussian(sigma=0.9), spatial_gaussian(x0=(0.3, -0.2, 0.1), sigma=1.0)
    rad = pair_integral(MomentumGrid(10.0, 64), None, f, g).value
    cart = pair_integral(MomentumGrid(10.0, 40, "cartesian-tensor"), None, f, g, tol=1e-5).value
    assert abs(rad - cart) < 1e-5


def test_underresolved_raises():
    f = spatial_gaussian(sigma=0.2)
    with pytest.raises(QuadratureError):
        pair_integral(MomentumGrid(200.0, 16), None, f, f, tol=1e-14)


def test_nodes_validation():
    with pytest.raises(ValueError):
        QuadratureNodes(np.zeros((4, 2)), np.ones(4))
    with pytest.raises(ValueError):
        MomentumGrid(1.0, 8)


def test_random_gaussian_ranges(rng):
    for _ in range(50):
        f = random_gaussian(rng)
        assert 0.6 <= f.sigma_x <= 1.5 and abs(abs(f.amplitude) - 1) < 1e-14
        assert max(abs(x) for x in f.k0) <= 0.5
