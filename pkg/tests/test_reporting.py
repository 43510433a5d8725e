import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nclimit.reporting import FitError, fit_power_law, judge, load_tolerances, richardson

CS = np.geomspace(10, 1e4, 7)


def test_exact_power_law():
    rep = fit_power_law([(c, 3.0 * c**-2) for c in CS])
    assert rep.fitted_exponent == pytest.approx(-2.0, abs=1e-12)
    assert rep.r_squared == pytest.approx(1.0)
    assert rep.used == 7


def test_mixture_exponent():
    rep = fit_power_law([(c, c**-2 + c**-4) for c in CS])
    assert -2.05 <= rep.fitted_exponent <= -2.0


def test_all_zero_errors():
    with pytest.raises(FitError):
        fit_power_law([(c, 0.0) for c in CS])


def test_floor_samples_dropped():
    samples = [(c, c**-2) for c in CS[:5]] + [(1e5, 0.0), (1e6, 0.0)]
    rep = fit_power_law(samples)
    assert rep.used == 5 and rep.notes


def test_bad_controls():
    with pytest.raises(FitError):
        fit_power_law([(-1.0, 1.0)] + [(c, 1.0) for c in CS])


@given(st.floats(1e-6, 1e6), st.floats(-5, -0.5), st.integers(0, 2**31 - 1))
def test_scale_equivariance(lam, p, seed):
    rng = np.random.default_rng(seed)
    err = CS**p * np.exp(0.05 * rng.normal(size=CS.size))
    a = fit_power_law(list(zip(CS, err)))
    b = fit_power_law(list(zip(CS, lam * err)))
    assert abs(a.fitted_exponent - b.fitted_exponent) < 1e-12
    assert b.intercept - a.intercept == pytest.approx(np.log(lam), abs=1e-9)


def test_fit_deterministic():
    s = [(c, c**-2 * (1 + 0.1 * np.sin(c))) for c in CS]
    assert fit_power_law(s) == fit_power_law(list(s))


def test_richardson_exact_h2():
    vals = [(h, 1.25 + 0.7 * h**2) for h in (0.1, 0.05, 0.025)]
    v, err = richardson(vals, order=2)
    assert abs(v - 1.25) < 1e-12


def test_richardson_error_bounds_residual():
    vals = [(h, 2.0 + 3 * h**2 + 40 * h**4 + 500 * h**6) for h in (0.1, 0.05, 0.025)]
    v, err = richardson(vals, order=2)
    assert abs(v - 2.0) <= err


def test_richardson_order_one():
    vals = [(h, -1.0 + 2 * h + 5 * h**2) for h in (0.4, 0.2, 0.1)]
    v, _ = richardson(vals, order=1)
    assert v == pytest.approx(-1.0, abs=1e-12)


@pytest.mark.parametrize("vals", [[(0.1, 1.0), (0.05, 1.0)], [(0.1, 1.0), (0.05, 1.0), (0.02, 1.0)],
                                  [(0.1, 1.0), (0.2, 1.0), (0.4, 1.0)]])
def test_richardson_preconditions(vals):
    with pytest.raises(FitError):
        richardson(vals)


def test_manifest_and_judge(tmp_path):
    m = load_tolerances()
    assert judge("dispersion.exponent", -2.01, m).passed
    assert not judge("dispersion.exponent", -2.03, m).passed
    assert judge("spectrum.relative", 5e-7, m).passed
    assert not judge("spectrum.relative", 5e-6, m).passed
    assert judge("spectrum.relative", 5e-6, m, quick=True).passed
    assert judge("witness.certificate", 1e-3, m).passed
    assert not judge("witness.certificate", 0.0, m).passed
    assert not judge("spectrum.relative", float("nan"), m).passed
    p = tmp_path / "t.json"
    p.write_text(json.dumps({"x": {"expected": 1.0}}))
    with pytest.raises(ValueError):
        load_tolerances(p)


def test_judge_r2_gate():
    m = load_tolerances()
    noisy = fit_power_law([(c, c**-2 * (1 + 0.9 * (-1) ** i)) for i, c in enumerate(CS)])
    v = judge("flat_wightman.exponent", -2.0, m, report=noisy)
    assert not v.passed and "r^2" in v.detail
