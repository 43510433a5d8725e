import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nclimit.fock import (MAX_PARTICLES, FockVector, GridMismatch, OneParticleWavefunction, annihilate,
                          apply_annihilator, apply_creator, bargmann_charge, convergence_vector_norm,
                          field_wavefunction, fock_nodes, fock_norm, gram_inner, nonseparating_witness, permanent,
                          time_zero_two_point)
from nclimit.flat_limit import equal_time_ccr
from nclimit.kinematics import PhysicalParams
from nclimit.oracles import dense_annihilate, dense_fock_state, dense_inner, eight_point_nodes
from nclimit.reporting import fit_power_law
from nclimit.smearing import random_gaussian, spacetime_gaussian, spatial_gaussian

P = PhysicalParams()
NODES8 = eight_point_nodes()
seeds = st.integers(0, 2**32 - 1)


def _wave(rng, nodes=NODES8):
    return OneParticleWavefunction(nodes, rng.normal(size=nodes.size) + 1j * rng.normal(size=nodes.size))


def _random_vector(rng, max_n=3, nodes=NODES8):
    v = FockVector.zero(nodes)
    for n in range(max_n + 1):
        coef = complex(*rng.normal(size=2))
        v = v + (FockVector.vacuum(nodes) * coef if n == 0 else FockVector.created(*[_wave(rng, nodes) for _ in range(n)], coef=coef))
    return v


def brute_permanent(a):
    n = a.shape[0]
    return sum(np.prod([a[i, s[i]] for i in range(n)]) for s in itertools.permutations(range(n))) if n else 1.0


@given(seeds, st.integers(0, MAX_PARTICLES))
def test_permanent_matches_brute_force(seed, n):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    assert abs(permanent(a) - brute_permanent(a)) < 1e-10 * max(1.0, abs(brute_permanent(a)))


@given(seeds)
def test_inner_matches_dense_oracle(seed):
    rng = np.random.default_rng(seed)
    u, v = _random_vector(rng), _random_vector(rng)
    assert abs(gram_inner(u, v) - dense_inner(dense_fock_state(u), dense_fock_state(v))) < 1e-8 * max(
        1.0, fock_norm(u) * fock_norm(v))


@given(seeds)
def test_annihilator_matches_dense_oracle(seed):
    rng = np.random.default_rng(seed)
    v, F = _random_vector(rng), _wave(rng)
    fast = dense_fock_state(annihilate(F, v))
    slow = dense_annihilate(F, dense_fock_state(v), NODES8.weights)
    for n in range(3):
        assert np.max(np.abs(fast[n] - slow[n])) < 1e-8 * max(1.0, np.max(np.abs(slow[n])))


@given(seeds)
def test_gram_positive(seed):
    v = _random_vector(np.random.default_rng(seed))
    g = gram_inner(v, v)
    assert g.real >= 0 and abs(g.imag) <= 1e-12 * g.real


@given(seeds, st.integers(0, 3), st.integers(0, 3))
def test_sector_orthogonality(seed, n, m):
    rng = np.random.default_rng(seed)
    u, v = _random_vector(rng), _random_vector(rng)
    val = gram_inner(u.sector(n), v.sector(m))
    if n != m:
        assert val == 0
    total = sum(gram_inner(u.sector(k), v.sector(k)) for k in range(4))
    assert abs(total - gram_inner(u, v)) < 1e-10 * max(1.0, abs(total))


@given(seeds)
def test_grading(seed):
    rng = np.random.default_rng(seed)
    v, F = _random_vector(rng), _wave(rng)
    for n in range(4):
        out = annihilate(F, v.sector(n))
        assert out.particle_numbers() == ([] if n == 0 else [n - 1])


def test_commutation_on_one_particle():
    rng = np.random.default_rng(1)
    F, g = _wave(rng), _wave(rng)
    out = annihilate(F, FockVector.created(g))
    assert out.particle_numbers() == [0]
    assert gram_inner(FockVector.vacuum(NODES8), out) == pytest.approx(F.inner(g), rel=1e-14)


def test_vacuum_is_annihilated():
    f = spacetime_gaussian()
    nodes = fock_nodes(f, n_radial=16)
    out = apply_annihilator(P, math.inf, f, FockVector.vacuum(nodes))
    assert out.is_zero and fock_norm(out) == 0.0


def test_creator_then_annihilator():
    f = spacetime_gaussian(omega0=0.1)
    nodes = fock_nodes(f, n_radial=32)
    one = apply_creator(P, 50.0, f, FockVector.vacuum(nodes))
    back = apply_annihilator(P, 50.0, f, one)
    F = field_wavefunction(P, 50.0, f, nodes)
    assert gram_inner(FockVector.vacuum(nodes), back) == pytest.approx(F.norm**2, rel=1e-12)


def test_bargmann_charge_per_sector():
    rng = np.random.default_rng(4)
    v = _random_vector(rng)
    p = PhysicalParams(m=2.5)
    charges = bargmann_charge(v, p)
    assert [s.n for s, _ in charges] == [0, 1, 2, 3]
    assert [s.mass_charge for s, _ in charges] == [0.0, 2.5, 5.0, 7.5]
    assert sum(w for _, w in charges) == pytest.approx(gram_inner(v, v).real, rel=1e-12)


def test_convergence_rate_n2():
    rng = np.random.default_rng(5)
    f = random_gaussian(rng)
    gs = [random_gaussian(rng, "spatial") for _ in range(2)]
    nodes = fock_nodes(f, *gs, n_radial=32)
    v = FockVector.created(*[OneParticleWavefunction.from_test_function(nodes, g) for g in gs])
    rep = fit_power_law([(c, convergence_vector_norm(P, c, f, v)) for c in np.geomspace(10, 1e4, 7)])
    assert abs(rep.fitted_exponent + 2) < 0.1


def test_witness_matched_probe():
    f = spacetime_gaussian(x0=(1.0, 0, 0), sigma_x=0.8, k0=(0.2, 0, 0))
    rec = nonseparating_witness(P, f)
    assert rec.vacuum_norm == 0.0 and rec.certificate > 0.1
    assert rec.probe_center == (1.0, 0.0, 0.0)


def test_witness_rejects_degenerate():
    with pytest.raises(ValueError):
        nonseparating_witness(P, spacetime_gaussian(amplitude=1e-12))
    with pytest.raises(ValueError):
        nonseparating_witness(P, spatial_gaussian())


def test_time_zero_limit():
    g1 = spatial_gaussian(x0=(0.2, 0, 0), sigma=0.9)
    g2 = spatial_gaussian(x0=(-0.1, 0.3, 0), sigma=1.1, k0=(0.1, 0, 0))
    val, err, raw = time_zero_two_point(P, g1, g2)
    # <psi(g1) psi(g2)^+> is antilinear in g1: the commutator pairing with arguments swapped
    want = equal_time_ccr(P, math.inf, g2, g1).value
    assert len(raw) == 3 and abs(val - want) < max(10 * err, 1e-6) * abs(want)


def test_grid_mismatch():
    rng = np.random.default_rng(0)
    other = eight_point_nodes(3.0)
    with pytest.raises(GridMismatch):
        annihilate(_wave(rng, other), FockVector.created(_wave(rng)))


def test_particle_cap():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        FockVector.created(*[_wave(rng) for _ in range(MAX_PARTICLES + 1)])
