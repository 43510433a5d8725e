import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nclimit.kinematics import (CODATA_2018, Dispersion, PhysicalParams, UnitScales, default_c_sweep,
                                dispersion_residual_bound, from_si, geometric_sweep, omega, omega_stripped,
                                to_si)


def test_rest_energy_at_zero_momentum(natural):
    assert omega(Dispersion(natural, 10.0), 0.0) == 100.0


def test_omega_closed_form(natural):
    assert omega(Dispersion(natural, 10.0), 1.0) == pytest.approx(10 * math.sqrt(101), rel=1e-15)


def test_stripped_approaches_half_k2(natural):
    assert abs(omega_stripped(Dispersion(natural, 1e6), 1.0) - 0.5) < 1e-12


def test_stripped_closed_form(natural):
    assert omega_stripped(Dispersion(natural, 10.0), 1.0) == pytest.approx(0.4987562112089027, rel=1e-14)
    assert omega_stripped(Dispersion(natural, 10.0), 0.0) == 0.0


def test_residual_next_order(natural):
    d = Dispersion(natural, 10.0)
    res = d.kinetic_residual(1.0)
    assert res == pytest.approx(0.0012437887910972978, rel=1e-12)
    assert abs(res / 0.00125 - 1) < 0.01


def test_bound_values(natural):
    d = Dispersion(natural, 10.0)
    assert dispersion_residual_bound(d, 1.0) == pytest.approx(0.00125, rel=1e-15)
    assert dispersion_residual_bound(d, 0.0) == 0.0
    assert Dispersion(natural, 20.0).residual_bound(1.0) == pytest.approx(0.00125 / 4, rel=1e-15)


def test_omega_undefined_at_infinity(natural):
    d = Dispersion(natural, math.inf)
    assert d.omega_stripped(2.0) == 2.0
    with pytest.raises(ValueError):
        d.omega(1.0)


@given(st.floats(1.0, 1e5), st.floats(0.0, 1e3), st.floats(0.1, 10.0))
def test_dispersion_properties(c, k, m):
    d = Dispersion(PhysicalParams(m=m, c=c), c)
    ws = float(d.omega_stripped(k))
    assert 0.0 <= ws <= k**2 / (2 * m) * (1 + 1e-15)
    assert float(d.omega(k)) >= m * c**2
    res = float(d.kinetic_residual(k))
    assert 0.0 <= res <= float(d.residual_bound(k)) * (1 + 1e-12)
    assert ws + res == pytest.approx(k**2 / (2 * m), rel=1e-12, abs=1e-300)


@given(st.floats(1.0, 1e4), st.floats(0.0, 50.0), st.floats(1e-3, 5.0))
def test_omega_strictly_increasing(c, k, dk):
    d = Dispersion(PhysicalParams(c=c), c)
    assert d.omega_stripped(k + dk) > d.omega_stripped(k)


@pytest.mark.parametrize("bad", [dict(m=0.0), dict(c=0.5), dict(hbar=2.0), dict(Q=-1.0), dict(units="cgs"),
                                 dict(G=float("inf"))])
def test_invalid_params(bad):
    with pytest.raises(ValueError):
        PhysicalParams(**bad)


def test_dict_roundtrip_and_unknown_field():
    p = PhysicalParams(M=3.0, Q=0.2)
    assert PhysicalParams.from_dict(p.as_dict()) == p
    with pytest.raises(ValueError):
        PhysicalParams.from_dict({"mass": 1.0})


def test_si_roundtrip():
    p = PhysicalParams(m=2.0, c=30.0, M=5.0, Q=0.3)
    sc = UnitScales(mass=1e-27, length=1e-15)
    q = from_si(to_si(p, sc), sc)
    for name in ("m", "c", "G", "M", "Q", "eps0", "kB"):
        assert getattr(q, name) == pytest.approx(getattr(p, name), rel=1e-12)
    assert q.hbar == 1.0


def test_si_constants():
    p = PhysicalParams.si()
    assert p.c == CODATA_2018["c"] and p.units == "SI"


def test_sweeps():
    cs = default_c_sweep()
    assert cs[0] == 10.0 and cs[-1] == pytest.approx(1e4) and cs.size == 7
    assert np.allclose(np.diff(np.log(cs)), np.log(10) / 2)
    with pytest.raises(ValueError):
        geometric_sweep(10, 1, 4)
