"""
Command-line front door.

Usage::

    nclimit <subcommand> [--params FILE] [--c LIST | --c-range LO:HI:N]
            [--out DIR] [--format csv,json,plot] [--quick] [--tolerances FILE]

Subcommands run one verification suite each (``all`` runs every suite).
Artifacts per suite, in ``--out``:

``<table>.csv``
    One header row ``key [unit] meaning`` per column, then data rows.
    Floats are written ``%.16e`` (17 significant digits), integers as is.
``<suite>.json``
    The suite payload (fits, settings, raw records).
``<suite>.verdict.json``
    ``{"suite", "passed", "verdicts": [...]}``.
``<table>.png``
    With ``--format plot``.

``all`` also writes ``summary.json``. On any failed verdict the process
writes ``failures.json`` (a list of failed claims), prints them to stderr and
exits 1; configuration errors exit 2.

Configuration precedence is flags > config file > defaults. The config file
is JSON with optional keys ``params`` (a PhysicalParams mapping), ``c``,
``c_range``, ``out``, ``format``, ``quick``, ``tolerances``, ``seed`` and
the per-suite options ``kind``, ``levels``, ``epsilon``, ``acceleration``.
``NCLIMIT_CONFIG`` names a config file when ``--params`` is absent.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .kinematics import PhysicalParams, geometric_sweep
from .reporting import fit_power_law, load_tolerances
from .suites import SUITES, SuiteContext, SuiteResult, Table

__all__ = ["RunConfig", "ConfigError", "SchemaError", "main", "run", "emit_plot", "read_csv", "write_csv"]

FORMATS = ("csv", "json", "plot")
CONFIG_ENV = "NCLIMIT_CONFIG"
CONFIG_KEYS = {"params", "c", "c_range", "out", "format", "quick", "tolerances", "seed",
               "kind", "levels", "epsilon", "acceleration"}
OPTION_KEYS = ("kind", "levels", "epsilon", "acceleration")


class ConfigError(ValueError):
    """Bad flags or config file (exit status 2)."""


class SchemaError(ValueError):
    """A CSV artifact does not have the columns a plot asks for."""


@dataclass
class RunConfig:
    subcommand: str
    params: PhysicalParams = field(default_factory=PhysicalParams)
    c_values: tuple | None = None
    out: Path = Path("nclimit-out")
    formats: tuple = ("csv", "json")
    quick: bool = False
    tolerances: str | None = None
    seed: int = 20240611
    options: dict = field(default_factory=dict)


# -- parsing --------------------------------------------------------------


def _parse_c_list(text) -> tuple:
    items = text if isinstance(text, (list, tuple)) else [x for x in str(text).split(",") if x.strip()]
    try:
        vals = [float(x) for x in items]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad c list {text!r}") from exc
    if not vals:
        raise ConfigError("empty c list")
    if any(not (math.isfinite(v) and v > 0) for v in vals):
        raise ConfigError("c values must be finite and > 0")
    return tuple(vals)


def _parse_c_range(text: str) -> tuple:
    try:
        lo, hi, n = str(text).split(":")
        return tuple(float(c) for c in geometric_sweep(float(lo), float(hi), int(n)))
    except ValueError as exc:
        raise ConfigError(f"bad --c-range {text!r}; expected LO:HI:N with 0 < LO < HI, N >= 2") from exc


def _parse_formats(text) -> tuple:
    items = text if isinstance(text, (list, tuple)) else str(text).split(",")
    fmts = tuple(dict.fromkeys(s.strip() for s in items if s.strip()))
    bad = [f for f in fmts if f not in FORMATS]
    if bad or not fmts:
        raise ConfigError(f"unknown format(s) {bad}; choose from {FORMATS}")
    return fmts


def _load_config(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    return data


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", metavar="FILE", help="JSON config file (falls back to $%s)" % CONFIG_ENV)
    sweep = common.add_mutually_exclusive_group()
    sweep.add_argument("--c", metavar="LIST", help="comma-separated c values")
    sweep.add_argument("--c-range", metavar="LO:HI:N", help="geometric c sweep")
    common.add_argument("--out", metavar="DIR")
    common.add_argument("--format", metavar="LIST", help="subset of csv,json,plot")
    common.add_argument("--quick", action="store_true", default=None, help="reduced grids and sweeps")
    common.add_argument("--tolerances", metavar="FILE", help="tolerance manifest (JSON)")
    common.add_argument("--seed", type=int)
    common.add_argument("--set", metavar="NAME=VALUE", action="append", default=[],
                        help="override one physical parameter, e.g. --set M=2")

    parser = argparse.ArgumentParser(prog="nclimit", description="c -> infinity limit verification suites")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in list(SUITES) + ["all"]:
        sp = sub.add_parser(name, parents=[common])
        if name in ("spectrum", "all"):
            sp.add_argument("--kind", choices=("schwarzschild", "rn"))
            sp.add_argument("--levels", type=int)
        if name in ("limit-square", "all"):
            sp.add_argument("--epsilon", type=float)
        if name in ("thermal", "all"):
            sp.add_argument("--acceleration", type=float)
    return parser


def resolve_config(args: argparse.Namespace, environ=None) -> RunConfig:
    """Merge flags, the config file and defaults into a :class:`RunConfig`."""
    environ = os.environ if environ is None else environ
    path = args.params or environ.get(CONFIG_ENV)
    file_cfg = _load_config(path) if path else {}

    pdict = dict(file_cfg.get("params", {}))
    for item in args.set:
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects NAME=VALUE, got {item!r}")
        try:
            pdict[name.strip()] = value.strip() if name.strip() == "units" else float(value)
        except ValueError as exc:
            raise ConfigError(f"--set {item!r}: {exc}") from exc
    try:
        params = PhysicalParams.from_dict(pdict)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid parameters: {exc}") from exc

    if args.c is not None:
        cs = _parse_c_list(args.c)
    elif args.c_range is not None:
        cs = _parse_c_range(args.c_range)
    elif "c" in file_cfg:
        cs = _parse_c_list(file_cfg["c"])
    elif "c_range" in file_cfg:
        cs = _parse_c_range(file_cfg["c_range"])
    else:
        cs = None

    def pick(flag, key, default):
        return flag if flag is not None else file_cfg.get(key, default)

    options = {}
    for key in OPTION_KEYS:
        val = pick(getattr(args, key, None), key, None)
        if val is not None:
            options[key] = val
    if "levels" in options and int(options["levels"]) < 1:
        raise ConfigError("--levels must be >= 1")
    if "epsilon" in options and not float(options["epsilon"]) > 0:
        raise ConfigError("--epsilon must be > 0")
    return RunConfig(subcommand=args.subcommand, params=params, c_values=cs,
                     out=Path(pick(args.out, "out", "nclimit-out")),
                     formats=_parse_formats(pick(args.format, "format", "csv,json")),
                     quick=bool(pick(args.quick, "quick", False)),
                     tolerances=pick(args.tolerances, "tolerances", None),
                     seed=int(pick(args.seed, "seed", 20240611)), options=options)


# -- writing --------------------------------------------------------------


def _cell(x):
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "%.16e" % float(x)
    return str(x)


def write_csv(table: Table, path: Path) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([c.header for c in table.columns])
        for row in table.rows:
            w.writerow([_cell(x) for x in row])
    return path


def read_csv(path) -> dict:
    """``{column key: float array}`` from a CSV written by :func:`write_csv`."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaError(f"{path} is empty")
    keys = [h.split(" [", 1)[0] for h in rows[0]]
    data = np.array([[float(x) for x in r] for r in rows[1:]], dtype=float).reshape(-1, len(keys))
    return {k: data[:, i] for i, k in enumerate(keys)}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    return x


def write_json(obj, path: Path) -> Path:
    path.write_text(json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path


def emit_plot(csv_path, spec, out_path=None) -> Path:
    """Render a :class:`~nclimit.suites.PlotSpec` from its CSV artifact.

    Log-log specs with ``fit`` annotate each series with its fitted slope.
    PNG metadata is pinned so identical inputs give identical bytes.

    Raises
    ------
    SchemaError
        A column named by the plot description is missing from the CSV.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    csv_path = Path(csv_path)
    cols = read_csv(csv_path)
    wanted = [spec.x, *spec.y] + ([spec.group] if spec.group else [])
    missing = [k for k in wanted if k not in cols]
    if missing:
        raise SchemaError(f"{csv_path.name} lacks column(s) {missing}")
    out_path = Path(out_path) if out_path else csv_path.with_suffix(".png")
    groups = np.unique(cols[spec.group]) if spec.group else [None]

    fig, ax = plt.subplots(figsize=(6, 4.2))
    for y in spec.y:
        for gval in groups:
            sel = np.ones(cols[spec.x].size, bool) if gval is None else cols[spec.group] == gval
            x, v = cols[spec.x][sel], np.abs(cols[y][sel]) if spec.loglog else cols[y][sel]
            label = y if gval is None else f"{y} ({spec.group} {gval:g})"
            if spec.loglog and spec.fit:
                try:
                    rep = fit_power_law(list(zip(x, v)))
                    label += f"  slope {rep.fitted_exponent:.3f}"
                except ValueError:
                    pass
            ax.plot(x, v, "o-", ms=3, label=label)
    if spec.loglog:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel(spec.x)
    ax.set_title(spec.title)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(out_path, metadata={"Software": None}, dpi=110)
    plt.close(fig)
    return out_path


def write_result(res: SuiteResult, cfg: RunConfig) -> list:
    out = cfg.out
    files = []
    for name, text in res.texts.items():
        p = out / name
        p.write_text(text, encoding="utf-8")
        files.append(p)
    csvs = {}
    if "csv" in cfg.formats or "plot" in cfg.formats:
        for tab in res.tables:
            csvs[tab.name] = write_csv(tab, out / f"{tab.name}.csv")
        files += list(csvs.values())
    if "json" in cfg.formats:
        files.append(write_json(res.payload, out / f"{res.name}.json"))
    if "plot" in cfg.formats:
        files += [emit_plot(csvs[s.table], s) for s in res.plots]
    files.append(write_json({"suite": res.name, "passed": res.passed,
                             "verdicts": [v.to_dict() for v in res.verdicts]},
                            out / f"{res.name}.verdict.json"))
    return files


# -- running --------------------------------------------------------------


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg.out.mkdir(parents=True, exist_ok=True)
        manifest = load_tolerances(cfg.tolerances)
    except (OSError, ValueError) as exc:
        print(f"nclimit: {exc}", file=stderr)
        return 2
    names = list(SUITES) if cfg.subcommand == "all" else [cfg.subcommand]
    failures, summary = [], {}
    for name in names:
        ctx = SuiteContext(params=cfg.params, c_values=cfg.c_values, quick=cfg.quick, manifest=manifest,
                           seed=cfg.seed, options=dict(cfg.options))
        try:
            res = SUITES[name](ctx)
        except KeyError as exc:
            print(f"nclimit: {name}: tolerance manifest lacks claim {exc}", file=stderr)
            return 2
        except Exception as exc:  # a suite that cannot run is a failed verdict, not a crash
            failures.append({"suite": name, "claim": None, "error": f"{type(exc).__name__}: {exc}"})
            summary[name] = {"passed": False, "error": str(exc)}
            print(f"{name}: ERROR {type(exc).__name__}: {exc}", file=stdout)
            continue
        write_result(res, cfg)
        summary[name] = {"passed": res.passed, "verdicts": [v.to_dict() for v in res.verdicts]}
        for v in res.verdicts:
            print(f"{name}: {'PASS' if v.passed else 'FAIL'} {v.claim} measured={v.measured:.6g}"
                  + (f" ({v.detail})" if v.detail and not v.passed else ""), file=stdout)
            if not v.passed:
                failures.append({"suite": name, **v.to_dict()})
    if cfg.subcommand == "all":
        write_json({"passed": not failures, "suites": summary}, cfg.out / "summary.json")
    fail_path = cfg.out / "failures.json"
    if failures:
        write_json(failures, fail_path)
        stdout.flush()
        for f in failures:
            print(f"FAILED {f['suite']}: {f.get('claim') or f.get('error')}", file=stderr)
        return 1
    if fail_path.exists():
        fail_path.unlink()
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"nclimit: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
