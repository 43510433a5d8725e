import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nclimit.heat_hadamard import (DEFAULT_DELTA, DomainError, RadialFunction, RadialGrid, default_tau_grid,
                                   diagonal_kernel, fit_hadamard, free_diagonal, propagate_heat,
                                   radial_hamiltonian, radial_kernel)
from nclimit.kinematics import PhysicalParams
from nclimit.static_modes import StaticBackground

P = PhysicalParams()
COULOMB = StaticBackground.schwarzschild(P)
FREE = StaticBackground.free(P)
SMALL = RadialGrid.spanning(DEFAULT_DELTA, 8.0, 0.04)


def exact_propagator(bg, l, grid, tau):
    """Dense ``exp(-tau H)`` from the eigendecomposition of the same discrete operator."""
    lam, U = np.linalg.eigh(radial_hamiltonian(bg, l, grid).toarray())
    return (U * np.exp(-tau * lam)) @ U.T


def bump(r0, s):
    return lambda r: np.exp(-((r - r0) ** 2) / (2 * s**2))


@pytest.mark.parametrize("bg,l", [(COULOMB, 0), (COULOMB, 2), (FREE, 1)])
def test_matches_dense_oracle(bg, l):
    tau = 0.3
    out = propagate_heat(bg, l, tau, bump(2.0, 0.4), grid=SMALL)
    want = exact_propagator(bg, l, SMALL, tau) @ bump(2.0, 0.4)(SMALL.r)
    assert np.max(np.abs(out.u - want)) < 1e-5 * np.max(np.abs(want))


def test_hamiltonian_symmetric():
    H = radial_hamiltonian(COULOMB, 1, SMALL)
    assert abs(H - H.T).max() == 0.0


def test_semigroup():
    u0 = bump(1.5, 0.3)
    half = propagate_heat(COULOMB, 0, 0.2, u0, grid=SMALL)
    two = propagate_heat(COULOMB, 0, 0.2, half, grid=SMALL)
    once = propagate_heat(COULOMB, 0, 0.4, u0, grid=SMALL)
    assert np.max(np.abs(two.u - once.u)) < 1e-5 * np.max(np.abs(once.u))


@given(st.floats(0.02, 0.5), st.floats(0.02, 0.5), st.integers(0, 3), st.floats(1.0, 4.0))
def test_semigroup_property(t1, t2, l, r0):
    u0 = bump(r0, 0.5)
    two = propagate_heat(COULOMB, l, t2, propagate_heat(COULOMB, l, t1, u0, grid=SMALL), grid=SMALL)
    once = propagate_heat(COULOMB, l, t1 + t2, u0, grid=SMALL)
    assert np.max(np.abs(two.u - once.u)) < 1e-4 * np.max(np.abs(once.u))


@given(st.integers(0, 2**32 - 1), st.integers(0, 4), st.floats(0.01, 1.0))
def test_positivity_and_contraction(seed, l, tau):
    rng = np.random.default_rng(seed)
    u0 = RadialFunction(SMALL, np.abs(rng.normal(size=SMALL.n)) * bump(3.0, 1.5)(SMALL.r))
    out = propagate_heat(COULOMB, l, tau, u0, grid=SMALL, n_steps=100)
    assert np.all(out.u >= -1e-12 * np.max(u0.u))
    # H >= E_1 = -1/2 on the sector, so ||exp(-tau H)|| <= exp(tau/2)
    assert out.norm() <= math.exp(0.5 * tau) * u0.norm() * (1 + 1e-9)


def test_kernel_symmetric():
    a = radial_kernel(COULOMB, 1, 0.05, 1.0, 1.2)
    b = radial_kernel(COULOMB, 1, 0.05, 1.2, 1.0)
    assert a == pytest.approx(b, rel=1e-3)


def test_free_diagonal_closed_form():
    s = diagonal_kernel(FREE, 2.0, 0.05)
    assert abs(s.rescaled - 1) < 1e-4
    assert s.diagonal_value == pytest.approx(float(free_diagonal(P, 0.05)), rel=1e-4)


def test_inside_ball():
    fit = fit_hadamard(COULOMB, 0.5 * DEFAULT_DELTA)
    assert not fit.valid and math.isnan(fit.a0)
    with pytest.raises(DomainError):
        diagonal_kernel(COULOMB, 0.01, 0.01)
    with pytest.raises(DomainError):
        propagate_heat(COULOMB, 0, 0.1, bump(1, 1), grid=RadialGrid.spanning(0.01, 5.0, 0.05))


def test_vector_probe_uses_radius():
    a = diagonal_kernel(FREE, (1.2, 1.6, 0.0), 0.02)
    assert a.probe == pytest.approx(2.0)


def test_tau_grid():
    t = default_tau_grid(P, 2.0)
    assert t.size == 6 and t[-1] / t[0] == pytest.approx(7.5)
    assert t[-1] <= 0.15 and math.sqrt(t[-1]) * 5 <= 2.0 - DEFAULT_DELTA + 1e-12


def test_tau_grid_validation():
    with pytest.raises(ValueError):
        fit_hadamard(COULOMB, 2.0, tau_grid=[0.01, 0.02, 0.03])
    with pytest.raises(ValueError):
        propagate_heat(COULOMB, 0, -1.0, bump(1, 1))


@pytest.fixture(scope="module")
def coulomb_fit():
    return fit_hadamard(COULOMB, 2.0)


def test_coulomb_coefficients(coulomb_fit):
    # a0 = 1, a1 = -V(r) = 1/r for exp(-tau H), H = -Laplacian/2 - 1/r
    f = coulomb_fit
    assert f.valid
    assert abs(f.a0 - 1) < 1e-3
    assert f.a1 == pytest.approx(0.5, abs=5e-3)
    assert f.to_dict()["valid"] is True


def test_close_probe_flagged():
    fit = fit_hadamard(COULOMB, 0.2, tau_grid=np.geomspace(0.01, 0.075, 6))
    assert not fit.valid and any("kernel widths" in r for r in fit.reasons)
