"""Bose-stimulated light scattering off a uniform ideal Bose gas."""

__version__ = "0.1.0"

from .bose_math import occupation, polylog_g32, zeta_three_halves
from .config import QuadratureConfig
from .errors import ConvergenceError, DomainError
from .scattering import (RateBreakdown, ScaledPoint, condensate_term, rate, sum_rule,
                         sweep_delta, sweep_tau, thermal_thermal_term, total_rate)
from .thermo import (ThermoState, condensate_fraction, critical_density, fugacity,
                     near_critical_expansion, thermo_state)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "QuadratureConfig",
    "RateBreakdown",
    "ScaledPoint",
    "ThermoState",
    "condensate_fraction",
    "condensate_term",
    "critical_density",
    "fugacity",
    "near_critical_expansion",
    "occupation",
    "polylog_g32",
    "rate",
    "sum_rule",
    "sweep_delta",
    "sweep_tau",
    "thermal_thermal_term",
    "thermo_state",
    "total_rate",
    "zeta_three_halves",
]
