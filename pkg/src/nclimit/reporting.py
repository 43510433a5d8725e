"""
Power-law rate fitting, Richardson extrapolation and verdicts.

Pass tolerances live in a JSON manifest (claim id -> expected exponent,
tolerance); this module only reports numbers and checks them against the
manifest it is handed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

__all__ = [
    "ConvergenceReport",
    "FitError",
    "Verdict",
    "fit_power_law",
    "richardson",
    "load_tolerances",
    "judge",
]

EPS = np.finfo(float).eps
MIN_SAMPLES = 4
R2_PASS = 0.98


class FitError(ValueError):
    """Raised when a fit or extrapolation has too little usable input."""


@dataclass(frozen=True)
class ConvergenceReport:
    samples: tuple  # ((control, error), ...) as given
    fitted_exponent: float
    intercept: float
    r_squared: float
    window: tuple  # (control_lo, control_hi) actually used
    used: int
    notes: tuple = ()

    @property
    def passes_r2(self) -> bool:
        return self.r_squared >= R2_PASS

    def to_dict(self) -> dict:
        d = asdict(self)
        d["samples"] = [list(s) for s in self.samples]
        d["window"] = list(self.window)
        d["notes"] = list(self.notes)
        return d


def fit_power_law(samples: Sequence, scale: float | None = None) -> ConvergenceReport:
    """Least-squares fit of ``log(error) = intercept + exponent * log(control)``.

    Samples at or below the saturation floor ``100 * eps * scale`` are dropped
    (``scale`` defaults to the largest error, i.e. the floor is relative).

    Raises
    ------
    FitError
        If fewer than four usable samples remain.
    """
    data = [(float(x), float(e)) for x, e in samples]
    x = np.array([d[0] for d in data])
    e = np.array([d[1] for d in data])
    if np.any(x <= 0) or np.any(~np.isfinite(x)):
        raise FitError("control parameters must be finite and positive")
    if np.any(e < 0) or np.any(~np.isfinite(e)):
        raise FitError("errors must be finite and nonnegative")
    if scale is None:
        scale = float(e.max()) if e.size else 0.0
    floor = 100.0 * EPS * abs(scale)
    keep = e > floor
    notes = []
    if np.any(~keep):
        notes.append(f"dropped {int((~keep).sum())} sample(s) at or below floor {floor:.3g}")
    if keep.sum() < MIN_SAMPLES:
        raise FitError(f"need >= {MIN_SAMPLES} positive samples above the floor, have {int(keep.sum())}")
    lx, le = np.log(x[keep]), np.log(e[keep])
    A = np.vstack([lx, np.ones_like(lx)]).T
    (slope, intercept), *_ = np.linalg.lstsq(A, le, rcond=None)
    pred = A @ np.array([slope, intercept])
    ss_res = float(np.sum((le - pred) ** 2))
    ss_tot = float(np.sum((le - le.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    r2 = min(max(r2, 0.0), 1.0)
    xs = x[keep]
    return ConvergenceReport(
        samples=tuple(data),
        fitted_exponent=float(slope),
        intercept=float(intercept),
        r_squared=r2,
        window=(float(xs.min()), float(xs.max())),
        used=int(keep.sum()),
        notes=tuple(notes),
    )


def richardson(values: Sequence, order: int = 2, step_order: int | None = None):
    """Richardson extrapolation to zero step.

    Parameters
    ----------
    values : sequence of (step, value)
        At least three entries with geometrically decreasing steps.
    order : int
        Leading error exponent ``p``; successive columns remove ``h^p``,
        ``h^(p+q)``, ... with ``q = step_order`` (defaults to ``p``, the
        symmetric ``h^2, h^4, h^6`` case for ``p = 2``).

    Returns
    -------
    (value, error_estimate)
        The error estimate is the magnitude of the last correction.
    """
    if len(values) < 3:
        raise FitError("richardson needs at least three steps")
    q = order if step_order is None else step_order
    h = np.array([float(s) for s, _ in values])
    if np.any(h <= 0):
        raise FitError("steps must be positive")
    ratios = h[:-1] / h[1:]
    if np.any(ratios <= 1.0) or not np.allclose(ratios, ratios[0], rtol=1e-9):
        raise FitError("steps must decrease geometrically")
    r = ratios[0]
    table = [np.asarray(v, dtype=complex if np.iscomplexobj(v) else float) for _, v in values]
    last_correction = None
    p = order
    while len(table) > 1:
        factor = r**p
        new = [(factor * table[i + 1] - table[i]) / (factor - 1.0) for i in range(len(table) - 1)]
        last_correction = new[-1] - table[-1]
        table = new
        p += q
    value = table[0]
    err = np.abs(last_correction)
    if np.ndim(value) == 0:
        return value.item(), float(err)
    return value, err


@dataclass(frozen=True)
class Verdict:
    claim: str
    passed: bool
    measured: float
    expected: float
    tolerance: float
    detail: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def load_tolerances(path: str | Path | None = None) -> dict:
    """Read a tolerance manifest; the packaged default when ``path`` is None."""
    if path is None:
        text = resources.files("nclimit").joinpath("data/tolerances.json").read_text()
    else:
        text = Path(path).read_text()
    manifest = json.loads(text)
    for claim, entry in manifest.items():
        if "tolerance" not in entry:
            raise ValueError(f"claim {claim!r} has no tolerance")
    return manifest


def judge(claim: str, measured: float, manifest: dict, *, report: ConvergenceReport | None = None,
          detail: str = "", quick: bool = False) -> Verdict:
    """Check ``measured`` against ``manifest[claim]``.

    Entries carry ``expected`` and ``tolerance`` (absolute, ``|measured -
    expected| <= tolerance``), or a ``kind``: ``"max"`` means ``measured <=
    tolerance`` and ``"min"`` means ``measured > tolerance``. An optional
    ``min_r2`` applies to the attached report. With ``quick`` the entry's
    ``quick_tolerance`` replaces ``tolerance`` when present.
    """
    entry = manifest[claim]
    tol = float(entry["quick_tolerance"] if quick and "quick_tolerance" in entry else entry["tolerance"])
    kind = entry.get("kind", "exponent")
    measured = float(measured)
    if kind == "max":
        expected = 0.0
        ok = measured <= tol
    elif kind == "min":
        expected = tol
        ok = measured > tol
    elif kind == "exponent":
        expected = float(entry["expected"])
        ok = abs(measured - expected) <= tol
    else:
        raise ValueError(f"claim {claim!r}: unknown kind {kind!r}")
    ok = bool(ok) and math.isfinite(measured)
    if report is not None:
        min_r2 = float(entry.get("min_r2", R2_PASS))
        if report.r_squared < min_r2:
            ok = False
            detail = (detail + "; " if detail else "") + f"r^2={report.r_squared:.5f} < {min_r2}"
    return Verdict(claim, ok, measured, expected, tol, detail)
