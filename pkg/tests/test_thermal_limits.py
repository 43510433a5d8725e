import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nclimit.kinematics import PhysicalParams
from nclimit.thermal_limits import (CSV_COLUMNS, MarginError, hawking_temperature, limit_square_report,
                                    pn_parameter, scaling_table, schwarzschild_radius, unruh_temperature)

P = PhysicalParams()
CS = [10.0, 30.0, 100.0, 300.0, 1000.0]


def test_closed_form_values():
    assert unruh_temperature(P, 1.0, 10.0) == pytest.approx(1 / (20 * math.pi), rel=1e-15)
    assert hawking_temperature(P, 10.0) == pytest.approx(1000 / (8 * math.pi), rel=1e-15)
    assert schwarzschild_radius(P, 10.0) == pytest.approx(0.02, rel=1e-15)
    assert pn_parameter(P, 1.0, 10.0) == pytest.approx(0.01, rel=1e-15)


def test_pn_quarter_at_twice_horizon():
    for c in CS:
        assert pn_parameter(P, 2 * schwarzschild_radius(P, c), c) == pytest.approx(0.25, rel=1e-15)


@given(st.floats(0.1, 10.0), st.floats(0.1, 10.0), st.floats(1.0, 1e4))
def test_conserved_products(G, M, c):
    p = PhysicalParams(G=G, M=M)
    assert unruh_temperature(p, 2.0, c) * c == pytest.approx(1 / math.pi, rel=1e-13)
    assert hawking_temperature(p, c) / c**3 == pytest.approx(1 / (8 * math.pi * G * M), rel=1e-13)
    assert schwarzschild_radius(p, c) * c**2 == pytest.approx(2 * G * M, rel=1e-13)


def test_margin_error():
    with pytest.raises(MarginError):
        scaling_table(P, 1.0, 0.01, [10.0])
    rows = scaling_table(P, 1.0, 0.04, [10.0])  # exactly 2 r_s is allowed
    assert rows[0].pn_small_parameter == pytest.approx(0.25)


def test_order_b_constant():
    rep = limit_square_report(P, CS, epsilon=1.0)
    assert rep.order_b_value == pytest.approx(0.25, abs=1e-16)
    assert rep.order_b_spread <= 1e-15
    for eps in (0.1, 0.5, 3.0):
        assert limit_square_report(P, CS, eps).order_b_value == pytest.approx(1 / (2 * (1 + eps)), rel=1e-15)


def test_order_a_slope_and_hawking_growth():
    rep = limit_square_report(P, CS, epsilon=0.5)
    assert abs(rep.order_a_fit.fitted_exponent + 2) < 1e-9
    assert rep.t_hh_diverges
    assert rep.t_hh_growth == pytest.approx(3.0, abs=1e-9)


def test_report_serialization():
    rep = limit_square_report(P, CS, epsilon=0.5)
    d = rep.to_dict()
    assert d["columns"] == list(CSV_COLUMNS)
    assert d["order_a_temperatures"] == "not applicable"
    assert len(rep.csv_rows()) == len(CS) and len(rep.csv_rows()[0]) == len(CSV_COLUMNS)
    assert rep.r_ref == pytest.approx(10 * schwarzschild_radius(P, 10.0))


def test_epsilon_validation():
    with pytest.raises(ValueError):
        limit_square_report(P, CS, epsilon=0.0)


def test_si_units_hawking():
    # solar-mass black hole, about 6.17e-8 K
    p = PhysicalParams.si(m=9.1093837015e-31, M=1.98847e30)
    assert hawking_temperature(p) == pytest.approx(6.17e-8, rel=1e-2)
