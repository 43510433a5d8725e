"""
Temperature and horizon scaling with c, and the two orderings of the
``c -> inf`` / near-horizon limits.

Unruh ``T_U = hbar a/(2 pi c k_B)``, Hawking ``T_HH = hbar c^3/(8 pi G M k_B)``,
``r_s = 2 G M/c^2`` and the post-Newtonian parameter ``|V|/(m c^2) = G M/(r c^2)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .kinematics import PhysicalParams
from .reporting import ConvergenceReport, fit_power_law

__all__ = [
    "ScalingRecord",
    "LimitSquareReport",
    "MarginError",
    "unruh_temperature",
    "hawking_temperature",
    "schwarzschild_radius",
    "pn_parameter",
    "scaling_table",
    "limit_square_report",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("c", "T_U", "T_HH", "r_s", "pn_fixed_r", "pn_near_horizon")
HORIZON_MARGIN = 2.0  # r_ref >= 2 r_s


class MarginError(ValueError):
    """Reference radius too close to the horizon."""


def unruh_temperature(params: PhysicalParams, a: float, c: float | None = None) -> float:
    c = params.c if c is None else c
    return params.hbar * a / (2 * math.pi * c * params.kB)


def hawking_temperature(params: PhysicalParams, c: float | None = None) -> float:
    c = params.c if c is None else c
    return params.hbar * c**3 / (8 * math.pi * params.G * params.M * params.kB)


def schwarzschild_radius(params: PhysicalParams, c: float | None = None) -> float:
    c = params.c if c is None else c
    return 2 * params.G * params.M / c**2


def pn_parameter(params: PhysicalParams, r: float, c: float | None = None) -> float:
    """``G M/(r c^2)``, which is ``r_s/(2r)``."""
    c = params.c if c is None else c
    return params.G * params.M / (r * c**2)


@dataclass(frozen=True)
class ScalingRecord:
    c: float
    T_U: float
    T_HH: float
    r_s: float
    pn_small_parameter: float

    def to_dict(self) -> dict:
        return asdict(self)


def scaling_table(params: PhysicalParams, a: float, r_ref: float, c_values) -> list:
    """One :class:`ScalingRecord` per ``c``.

    Raises
    ------
    MarginError
        If ``r_ref < 2 r_s(c)`` for any swept ``c``.
    """
    rows = []
    for c in c_values:
        c = float(c)
        rs = schwarzschild_radius(params, c)
        if r_ref < HORIZON_MARGIN * rs:
            raise MarginError(f"r_ref = {r_ref:.3g} is inside {HORIZON_MARGIN} r_s = {HORIZON_MARGIN * rs:.3g} at c = {c:.3g}")
        rows.append(ScalingRecord(c, unruh_temperature(params, a, c), hawking_temperature(params, c), rs,
                                  pn_parameter(params, r_ref, c)))
    return rows


@dataclass(frozen=True)
class LimitSquareReport:
    """Order (a): ``c -> inf`` at fixed radius. Order (b): ``r -> r_s(c)(1 + eps)`` first.

    The temperature columns belong to order (b); order (a) carries none and
    is marked "not applicable" in the serialized form.
    """

    epsilon: float
    r_ref: float
    rows: tuple  # (c, T_U, T_HH, r_s, pn_fixed_r, pn_near_horizon)
    order_a_fit: ConvergenceReport
    order_b_value: float
    order_b_spread: float
    t_hh_diverges: bool
    t_hh_growth: float  # fitted exponent of T_HH in c

    def csv_rows(self) -> list:
        return [list(r) for r in self.rows]

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "r_ref": self.r_ref, "columns": list(CSV_COLUMNS),
                "rows": self.csv_rows(), "order_a_exponent": self.order_a_fit.fitted_exponent,
                "order_a_temperatures": "not applicable", "order_b_value": self.order_b_value,
                "order_b_spread": self.order_b_spread, "t_hh_diverges": self.t_hh_diverges,
                "t_hh_exponent": self.t_hh_growth}


def limit_square_report(params: PhysicalParams, c_values, epsilon: float, a: float = 1.0,
                        r_ref: float | None = None) -> LimitSquareReport:
    """Tabulate both orderings over the sweep.

    ``r_ref`` defaults to ``10 r_s`` at the smallest swept ``c``.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be > 0")
    cs = np.asarray(sorted(float(c) for c in c_values))
    if r_ref is None:
        r_ref = 10 * schwarzschild_radius(params, cs[0])
    table = scaling_table(params, a, r_ref, cs)
    rows = []
    for rec in table:
        r_near = rec.r_s * (1 + epsilon)
        rows.append((rec.c, rec.T_U, rec.T_HH, rec.r_s, rec.pn_small_parameter, pn_parameter(params, r_near, rec.c)))
    near = np.array([r[5] for r in rows])
    target = 1.0 / (2 * (1 + epsilon))
    fit_a = fit_power_law([(r[0], r[4]) for r in rows])
    fit_t = fit_power_law([(r[0], r[2]) for r in rows])
    return LimitSquareReport(
        epsilon=float(epsilon),
        r_ref=float(r_ref),
        rows=tuple(rows),
        order_a_fit=fit_a,
        order_b_value=float(near.mean()),
        order_b_spread=float(np.max(np.abs(near - target)) / target),
        t_hh_diverges=bool(fit_t.fitted_exponent > 0 and np.all(np.diff([r[2] for r in rows]) > 0)),
        t_hh_growth=fit_t.fitted_exponent,
    )
