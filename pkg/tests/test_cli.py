import json
from importlib import resources

import pytest

from nclimit import cli
from nclimit.suites import Column, PlotSpec, Table


def files(d):
    return {p.name: p.read_bytes() for p in sorted(d.iterdir())}


def test_thermal_rows(tmp_path):
    assert cli.main(["thermal", "--c", "10,100,1000", "--out", str(tmp_path)]) == 0
    data = cli.read_csv(tmp_path / "thermal.csv")
    assert list(data["c"]) == [10.0, 100.0, 1000.0]
    assert set(data) >= {"T_U", "T_HH", "r_s"}
    verdict = json.loads((tmp_path / "thermal.verdict.json").read_text())
    assert verdict["passed"] and verdict["suite"] == "thermal"
    assert not (tmp_path / "failures.json").exists()


def test_csv_header_has_units_and_full_precision(tmp_path):
    cli.main(["dispersion", "--out", str(tmp_path)])
    lines = (tmp_path / "dispersion.csv").read_text().splitlines()
    assert all("[" in h and "]" in h for h in lines[0].split(","))
    first = lines[1].split(",")[0]
    assert len(first.split("e")[0].replace(".", "").lstrip("-")) == 17


def test_spectrum_csv(tmp_path):
    assert cli.main(["spectrum", "--levels", "3", "--quick", "--out", str(tmp_path)]) == 0
    tab = cli.read_csv(next(tmp_path.glob("*.csv")))
    assert len(tab["n"]) == 3 + 2 + 1  # l = 0, 1, 2 up to n = 3
    for n, e in zip(tab["n"], tab["E"]):
        assert e == pytest.approx(-0.5 / n**2, rel=1e-5)


def test_deterministic_artifacts(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert cli.main(["thermal", "--out", str(d), "--format", "csv,json,plot"]) == 0
    assert files(a) == files(b)
    assert "thermal.png" in files(a)


def test_failure_exit_and_report(tmp_path, capsys):
    tol = tmp_path / "tol.json"
    manifest = json.loads(resources.files("nclimit").joinpath("data/tolerances.json").read_text())
    manifest["dispersion.envelope"] = {"kind": "max", "tolerance": 1e-9}
    tol.write_text(json.dumps(manifest))
    out = tmp_path / "o"
    assert cli.main(["dispersion", "--out", str(out), "--tolerances", str(tol)]) == 1
    fails = json.loads((out / "failures.json").read_text())
    assert [f["claim"] for f in fails] == ["dispersion.envelope"]
    assert "FAILED dispersion: dispersion.envelope" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["thermal", "--c", "10,abc"],
    ["thermal", "--c", "-1"],
    ["thermal", "--c-range", "10:1:3"],
    ["thermal", "--format", "xml"],
    ["thermal", "--set", "m"],
    ["thermal", "--set", "m=heavy"],
    ["limit-square", "--epsilon", "0"],
    ["nonsense"],
    ["thermal", "--c", "10", "--c-range", "1:10:3"],
])
def test_config_errors_exit_2(argv, tmp_path):
    assert cli.main(argv + ["--out", str(tmp_path)] if argv != ["nonsense"] else argv) == 2


def test_missing_manifest_claim_exit_2(tmp_path):
    tol = tmp_path / "tol.json"
    tol.write_text(json.dumps({"dispersion.exponent": {"expected": -2.0, "tolerance": 0.02}}))
    assert cli.main(["dispersion", "--out", str(tmp_path), "--tolerances", str(tol)]) == 2


def test_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"params": {"m": 2.0}, "c": [5, 50], "quick": True, "seed": 7, "epsilon": 0.3}))
    parser = cli.build_parser()
    rc = cli.resolve_config(parser.parse_args(["limit-square", "--params", str(cfg), "--c", "20,40"]))
    assert rc.c_values == (20.0, 40.0) and rc.params.m == 2.0 and rc.quick and rc.seed == 7
    assert rc.options["epsilon"] == 0.3
    rc = cli.resolve_config(parser.parse_args(["limit-square", "--params", str(cfg), "--epsilon", "2",
                                               "--set", "m=3"]))
    assert rc.c_values == (5.0, 50.0) and rc.options["epsilon"] == 2.0 and rc.params.m == 3.0
    # the environment variable stands in for --params
    rc = cli.resolve_config(parser.parse_args(["thermal"]), environ={cli.CONFIG_ENV: str(cfg)})
    assert rc.seed == 7
    rc = cli.resolve_config(parser.parse_args(["thermal"]), environ={})
    assert rc.seed == 20240611 and rc.c_values is None and not rc.quick


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"colour": "blue"}))
    assert cli.main(["thermal", "--params", str(cfg), "--out", str(tmp_path)]) == 2


def test_c_range(tmp_path):
    rc = cli.resolve_config(cli.build_parser().parse_args(["thermal", "--c-range", "10:1000:3"]), environ={})
    assert rc.c_values == pytest.approx((10.0, 100.0, 1000.0))


def test_emit_plot_schema_error(tmp_path):
    tab = Table("t", (Column("x", "1", "abscissa"), Column("y", "1", "ordinate")), [(1.0, 2.0), (2.0, 8.0)])
    path = cli.write_csv(tab, tmp_path / "t.csv")
    png = cli.emit_plot(path, PlotSpec("t", "x", "y", loglog=True, fit=True))
    assert png.exists() and png.stat().st_size > 0
    with pytest.raises(cli.SchemaError):
        cli.emit_plot(path, PlotSpec("t", "x", "missing"))


def test_jsonable_nan_and_complex(tmp_path):
    p = cli.write_json({"a": float("nan"), "z": 1 + 2j}, tmp_path / "x.json")
    assert json.loads(p.read_text()) == {"a": None, "z": [1.0, 2.0]}
