"""Laboratory units, polarization factors and the heating figure of merit.

The natural momentum unit is ``sqrt(m k_B T_c)``. A photon of wavelength
``lambda_L`` then carries ``k = (h / lambda_L) / sqrt(m k_B T_c)`` and a
scattering angle ``theta`` transfers ``delta = 2 k sin(theta/2)``
(``= k sin(theta) / cos(theta/2)``).

Constants are the exact SI values of the 2019 redefinition together with the
CODATA 2018 atomic mass constant; they are pinned here rather than taken
from :mod:`scipy.constants` so results do not drift with the SciPy version.
"""

import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .scattering import total_rate

__all__ = [
    "PLANCK",
    "HBAR",
    "BOLTZMANN",
    "SPEED_OF_LIGHT",
    "ATOMIC_MASS_UNIT",
    "LabParameters",
    "PolarizationMode",
    "scaled_photon_momentum",
    "delta_from_angle",
    "delta_small_angle",
    "angle_from_delta",
    "polarization_factor",
    "heating_reduction_factor",
]

PLANCK = 6.62607015e-34  # J s
HBAR = PLANCK / (2.0 * math.pi)
BOLTZMANN = 1.380649e-23  # J / K
SPEED_OF_LIGHT = 299792458.0  # m / s
ATOMIC_MASS_UNIT = 1.66053906660e-27  # kg, CODATA 2018


@dataclass(frozen=True)
class LabParameters:
    """Atom mass [kg], probe wavelength [m] and critical temperature [K]."""

    atom_mass: float
    wavelength: float
    critical_temperature: float

    def __post_init__(self):
        for name in ("atom_mass", "wavelength", "critical_temperature"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value}")

    @classmethod
    def from_lab(cls, mass_amu, wavelength_nm, tc_nk):
        return cls(mass_amu * ATOMIC_MASS_UNIT, wavelength_nm * 1e-9, tc_nk * 1e-9)

    @property
    def momentum_unit(self):
        """``sqrt(m k_B T_c)`` in kg m / s."""
        return math.sqrt(self.atom_mass * BOLTZMANN * self.critical_temperature)


class PolarizationMode(str, enum.Enum):
    IN_PLANE = "in_plane"
    PERPENDICULAR = "perpendicular"
    UNPOLARIZED = "unpolarized"


def scaled_photon_momentum(params):
    """Photon momentum ``h / lambda`` in units of ``sqrt(m k_B T_c)``."""
    return PLANCK / params.wavelength / params.momentum_unit


def _check_k(k):
    if not (k > 0 and math.isfinite(k)):
        raise DomainError(f"k must be positive, got {k}")


def delta_from_angle(theta, k):
    """Momentum transfer for scattering angle ``theta`` in ``(0, pi]``."""
    _check_k(k)
    if not 0.0 < theta <= math.pi:
        raise DomainError(f"theta must lie in (0, pi], got {theta}")
    return 2.0 * k * math.sin(0.5 * theta)


def delta_small_angle(theta, k):
    """Small-angle form ``theta * k``."""
    _check_k(k)
    return theta * k


def angle_from_delta(delta, k):
    """Inverse of :func:`delta_from_angle`; needs ``0 < delta <= 2k``."""
    _check_k(k)
    if not 0.0 < delta <= 2.0 * k:
        raise DomainError(f"delta must lie in (0, 2k] = (0, {2 * k}], got {delta}")
    return 2.0 * math.asin(min(1.0, 0.5 * delta / k))


def polarization_factor(theta, mode):
    """Angular factor of the bare (unstimulated) rate.

    ``cos^2 theta`` for polarization in the scattering plane, 1 for
    perpendicular, and their mean for unpolarized light.
    """
    if not 0.0 <= theta <= math.pi:
        raise DomainError(f"theta must lie in [0, pi], got {theta}")
    mode = PolarizationMode(mode)
    c2 = math.cos(theta) ** 2
    if mode is PolarizationMode.IN_PLANE:
        return c2
    if mode is PolarizationMode.PERPENDICULAR:
        return 1.0
    return 0.5 * (1.0 + c2)


def heating_reduction_factor(small_point, reference_point, config=None):
    """``R(small) / R(reference)`` at a common temperature.

    At equal detected signal the probe intensity, and with it the heating
    from the isotropic part of the rate, can be lowered by this factor by
    moving the detector from the reference angle to the small one.
    """
    if small_point.tau != reference_point.tau:
        raise DomainError("both points must share the same tau")
    return total_rate(small_point, config).total / total_rate(reference_point, config).total
