"""
Physical parameters, unit conversion and the relativistic dispersion relation.

Everything downstream reads its constants from a :class:`PhysicalParams`
instance. The default unit system is natural (``hbar = 1``) with ``m``, ``c``,
``G`` and ``M`` left as free dials; SI values only matter for the thermal
headline numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace, fields

import numpy as np

__all__ = [
    "CODATA_2018",
    "PhysicalParams",
    "UnitScales",
    "Dispersion",
    "default_c_sweep",
    "geometric_sweep",
    "to_si",
    "from_si",
]

# CODATA 2018 recommended values (SI). hbar, c, k_B are exact since the 2019
# redefinition.
CODATA_2018 = {
    "hbar": 1.054571817e-34,  # J s
    "c": 299792458.0,  # m / s
    "G": 6.67430e-11,  # m^3 / (kg s^2)
    "eps0": 8.8541878128e-12,  # F / m
    "kB": 1.380649e-23,  # J / K
}

UNIT_TAGS = ("natural", "SI")


@dataclass(frozen=True)
class PhysicalParams:
    """The dial set every formula reads from.

    Parameters
    ----------
    m : float
        Field (particle) mass.
    c : float
        Speed of light; the limit dial.
    hbar, G, M, Q, eps0, kB : float
        Reduced Planck constant, gravitational constant, central mass,
        central charge, vacuum permittivity and Boltzmann constant.
    units : str
        ``"natural"`` (requires ``hbar == 1``) or ``"SI"``.

    Notes
    -----
    In natural units ``eps0`` defaults to ``1/(4 pi)`` so that the
    Reissner--Nordstrom charge term reads ``G Q^2 / (c^4 r^2)``.
    """

    m: float = 1.0
    c: float = 10.0
    hbar: float = 1.0
    G: float = 1.0
    M: float = 1.0
    Q: float = 0.0
    eps0: float = 1.0 / (4.0 * math.pi)
    kB: float = 1.0
    units: str = "natural"

    def __post_init__(self):
        if self.units not in UNIT_TAGS:
            raise ValueError(f"unknown units tag {self.units!r}")
        for name in ("m", "c", "hbar", "G", "M", "eps0", "kB"):
            value = getattr(self, name)
            if not (value > 0.0) or not math.isfinite(value):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
        if not (self.Q >= 0.0) or not math.isfinite(self.Q):
            raise ValueError(f"Q must be finite and >= 0, got {self.Q!r}")
        if self.units == "natural":
            if self.hbar != 1.0:
                raise ValueError("natural units require hbar == 1")
            if self.c < 1.0:
                raise ValueError("natural units require c >= 1")

    @classmethod
    def si(cls, **overrides) -> "PhysicalParams":
        """SI parameters with CODATA 2018 constants; ``m``, ``M``, ``Q`` via overrides."""
        base = dict(CODATA_2018)
        base.update(m=overrides.pop("m", 9.1093837015e-31), M=overrides.pop("M", 1.0))
        base.update(overrides)
        return cls(units="SI", **base)

    def with_c(self, c: float) -> "PhysicalParams":
        return replace(self, c=float(c))

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, data: dict) -> "PhysicalParams":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown parameter fields: {sorted(unknown)}")
        return cls(**data)

    # Frequently used derived quantities.
    @property
    def rest_frequency(self) -> float:
        """m c^2 / hbar."""
        return self.m * self.c**2 / self.hbar

    @property
    def compton_wavenumber(self) -> float:
        """m c / hbar."""
        return self.m * self.c / self.hbar

    @property
    def schwarzschild_radius(self) -> float:
        return 2.0 * self.G * self.M / self.c**2

    @property
    def bohr_radius(self) -> float:
        """hbar^2 / (G M m^2): length scale of the gravitational hydrogenic problem."""
        return self.hbar**2 / (self.G * self.M * self.m**2)

    @property
    def alpha_grav(self) -> float:
        """Dimensionless gravitational coupling G M m / (hbar c)."""
        return self.G * self.M * self.m / (self.hbar * self.c)

    @property
    def charge_length2(self) -> float:
        """G Q^2 / (4 pi eps0), the numerator of the RN charge term (before 1/c^4)."""
        return self.G * self.Q**2 / (4.0 * math.pi * self.eps0)


@dataclass(frozen=True)
class UnitScales:
    """Base units of a natural system expressed in SI.

    The time unit is fixed by ``hbar = 1``: ``T = mass * length**2 / hbar_SI``.
    Temperature is measured in energy units (``kB = 1`` when converting
    CODATA values).
    """

    length: float = 1.0  # m
    mass: float = 1.0  # kg
    charge: float = 1.0  # C

    @property
    def time(self) -> float:
        return self.mass * self.length**2 / CODATA_2018["hbar"]

    @property
    def energy(self) -> float:
        return self.mass * self.length**2 / self.time**2

    @property
    def temperature(self) -> float:
        return self.energy / CODATA_2018["kB"]

    def factors(self) -> dict:
        """SI value of one natural unit of each parameter field."""
        L, Mu, T, Qu = self.length, self.mass, self.time, self.charge
        return {
            "m": Mu,
            "M": Mu,
            "c": L / T,
            "hbar": Mu * L**2 / T,
            "G": L**3 / (Mu * T**2),
            "Q": Qu,
            "eps0": Qu**2 * T**2 / (Mu * L**3),
            "kB": self.energy / self.temperature,
        }


def to_si(p: PhysicalParams, scales: UnitScales | None = None) -> PhysicalParams:
    """Convert natural-unit parameters to SI."""
    if p.units == "SI":
        return p
    if p.units != "natural":
        raise ValueError(f"unknown units tag {p.units!r}")
    f = (scales or UnitScales()).factors()
    values = {k: getattr(p, k) * f[k] for k in f}
    return PhysicalParams(units="SI", **values)


def from_si(p: PhysicalParams, scales: UnitScales | None = None) -> PhysicalParams:
    """Convert SI parameters back to the natural system defined by ``scales``."""
    if p.units == "natural":
        return p
    if p.units != "SI":
        raise ValueError(f"unknown units tag {p.units!r}")
    f = (scales or UnitScales()).factors()
    values = {k: getattr(p, k) / f[k] for k in f}
    # hbar is exactly one by construction; strip the rounding residue.
    values["hbar"] = 1.0
    return PhysicalParams(units="natural", **values)


def geometric_sweep(lo: float, hi: float, n: int) -> np.ndarray:
    if n < 2 or not (0 < lo < hi):
        raise ValueError("need n >= 2 and 0 < lo < hi")
    return np.geomspace(lo, hi, n)


def default_c_sweep() -> np.ndarray:
    """The default c sweep {10, 31.6, ..., 10^4}, uniform in log c."""
    return geometric_sweep(10.0, 1.0e4, 7)


@dataclass(frozen=True)
class Dispersion:
    """Positive-frequency Klein--Gordon dispersion ``omega(k) = c sqrt(k^2 + m^2 c^2/hbar^2)``.

    ``c`` overrides ``params.c`` and may be ``math.inf``; at infinity the
    stripped frequency is exactly ``hbar k^2 / 2m``.
    """

    params: PhysicalParams
    c: float | None = None

    @property
    def speed(self) -> float:
        return self.params.c if self.c is None else self.c

    def _x(self, k):
        # hbar^2 k^2 / (m^2 c^2); zero at c = inf.
        p = self.params
        return (p.hbar * np.asarray(k, dtype=float) / (p.m * self.speed)) ** 2

    def omega_stripped(self, k):
        """``omega(k) - m c^2/hbar`` without subtracting large numbers."""
        p = self.params
        k = np.asarray(k, dtype=float)
        s = np.sqrt(1.0 + self._x(k))
        return p.hbar * k**2 / (p.m * (s + 1.0))

    def omega(self, k):
        if math.isinf(self.speed):
            raise ValueError("omega diverges at c = inf; use omega_stripped")
        return self.params.m * self.speed**2 / self.params.hbar + self.omega_stripped(k)

    def kinetic_residual(self, k):
        """``hbar k^2/2m - omega_stripped(k)``, computed cancellation-free.

        Equal to ``hbar k^2 x / (2 m (1 + sqrt(1+x))^2)`` with
        ``x = hbar^2 k^2/(m^2 c^2)``.
        """
        p = self.params
        k = np.asarray(k, dtype=float)
        x = self._x(k)
        s = np.sqrt(1.0 + x)
        return p.hbar * k**2 * x / (2.0 * p.m * (1.0 + s) ** 2)

    def residual_bound(self, k):
        """Leading correction magnitude ``hbar^3 k^4 / (8 m^3 c^2)``."""
        p = self.params
        k = np.asarray(k, dtype=float)
        return p.hbar**3 * k**4 / (8.0 * p.m**3 * self.speed**2)

    def amplitude_prefactor(self, k):
        """``sqrt(m c^2 / (hbar omega)) = (1 + hbar^2 k^2/m^2 c^2)^(-1/4)``."""
        return (1.0 + self._x(k)) ** -0.25

    def rest_ratio(self, k):
        """``m c^2 / (hbar omega) = (1 + hbar^2 k^2/m^2 c^2)^(-1/2)``."""
        return (1.0 + self._x(k)) ** -0.5


def omega(d: Dispersion, k):
    return d.omega(k)


def omega_stripped(d: Dispersion, k):
    return d.omega_stripped(k)


def dispersion_residual_bound(d: Dispersion, k):
    return d.residual_bound(k)
