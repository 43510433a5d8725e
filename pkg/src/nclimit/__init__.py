"""
nclimit: numerical checks of the c -> infinity limit of the free
Klein--Gordon field.

Modules
-------
kinematics      parameters, units, dispersion relation
smearing        Gaussian test functions and momentum quadrature
flat_limit      smeared Wightman functions and equal-time commutators
fock            truncated bosonic Fock space and the vacuum witness
contraction     symbolic Poincare algebra and grid generators
static_modes    Numerov eigensolvers on static backgrounds
heat_hadamard   heat kernel and its short-time coefficients
thermal_limits  temperature and horizon scaling tables
reporting       power-law fits, Richardson, verdicts
suites, cli     the verification runs behind the ``nclimit`` command
"""

from .kinematics import Dispersion, PhysicalParams, default_c_sweep
from .reporting import ConvergenceReport, fit_power_law, judge, load_tolerances, richardson
from .smearing import MomentumGrid, TestFunction, spacetime_gaussian, spatial_gaussian

__version__ = "0.1.0"

__all__ = [
    "ConvergenceReport",
    "Dispersion",
    "MomentumGrid",
    "PhysicalParams",
    "TestFunction",
    "default_c_sweep",
    "fit_power_law",
    "judge",
    "load_tolerances",
    "richardson",
    "spacetime_gaussian",
    "spatial_gaussian",
]
