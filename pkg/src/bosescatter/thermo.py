"""Ideal Bose gas at fixed density in scaled units.

Units: hbar = 1, momenta in ``sqrt(m k_B T_c)``, temperatures in ``T_c``.
The density is held at its critical value for every ``tau``; below
``tau = 1`` the excess sits in the p = 0 condensate, above it the fugacity
drops below one.
"""

import math
from dataclasses import dataclass

from scipy import optimize

from .bose_math import polylog_g32_eps, zeta_three_halves
from .errors import ConvergenceError, DomainError

__all__ = [
    "CONVENTIONS",
    "ThermoState",
    "critical_density",
    "condensate_fraction",
    "fugacity",
    "fugacity_eps",
    "near_critical_expansion",
    "thermal_density",
    "thermo_state",
]

CONVENTIONS = ("integral", "paper_constant")

# lambda ~ 1 - C (tau - 1)^2 just above T_c
_EXPANSION_COEFF = 9.0 / (16.0 * math.pi) * zeta_three_halves() ** 2

_ROOT_MAX_ITER = 200
_RESIDUAL_TOL = 1e-10


def _check_tau(tau):
    tau = float(tau)
    if not tau > 0 or math.isinf(tau):
        raise DomainError(f"tau must be positive and finite, got {tau}")
    return tau


def critical_density(convention="integral"):
    """Critical density ``N_total`` in scaled units.

    ``"integral"`` gives the value of ``int d^3p (e^{p^2/2} - 1)^{-1}``,
    i.e. ``(2 pi)^{3/2} zeta(3/2) = 41.14``. ``"paper_constant"`` gives
    half of that, the prefactor as originally printed, kept for comparison.
    """
    value = (2.0 * math.pi) ** 1.5 * zeta_three_halves()
    if convention == "integral":
        return value
    if convention == "paper_constant":
        return 0.5 * value
    raise DomainError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")


def thermal_density(tau, eps):
    """``int d^3p`` of the Bose occupancy, ``(2 pi tau)^{3/2} g_{3/2}(e^{-eps})``."""
    tau = _check_tau(tau)
    return (2.0 * math.pi * tau) ** 1.5 * polylog_g32_eps(eps)


def condensate_fraction(tau):
    """Fraction of atoms in the p = 0 state, ``max(0, 1 - tau^{3/2})``."""
    tau = _check_tau(tau)
    return max(0.0, 1.0 - tau ** 1.5)


def fugacity_eps(tau):
    """``-ln(lambda(tau))``; zero at and below ``tau = 1``.

    For ``tau > 1`` solves ``g_{3/2}(e^{-eps}) = zeta(3/2) tau^{-3/2}``.
    Since ``g_{3/2}(lam) <= lam zeta(3/2)``, the root lies in
    ``(0, 1.5 ln tau]``, which brackets it for Brent's method.
    """
    tau = _check_tau(tau)
    if tau <= 1.0:
        return 0.0
    target = zeta_three_halves() * tau ** -1.5
    hi = 1.5 * math.log(tau)

    def residual(eps):
        return polylog_g32_eps(eps) - target

    if residual(hi) >= 0.0:
        # bound is attained only in the classical limit; g(eps) ~ e^{-eps} there
        hi *= 2.0
    try:
        eps = optimize.brentq(residual, 0.0, hi, xtol=1e-300, rtol=4 * 2.2205e-16,
                              maxiter=_ROOT_MAX_ITER)
    except RuntimeError as exc:
        raise ConvergenceError(f"fugacity root not found at tau={tau}: {exc}",
                               term="fugacity") from exc
    if abs(residual(eps)) > _RESIDUAL_TOL:
        raise ConvergenceError(
            f"fugacity residual {residual(eps):.3e} exceeds {_RESIDUAL_TOL} at tau={tau}",
            term="fugacity")
    return eps


def fugacity(tau):
    """Fugacity ``lambda = exp(mu / tau)`` at fixed critical density.

    >>> fugacity(0.7)
    1.0
    >>> round(fugacity(2.0), 6)
    0.663418
    """
    return math.exp(-fugacity_eps(tau))


def near_critical_expansion(tau):
    """Quadratic approximation ``1 - (9/16pi) zeta(3/2)^2 (tau - 1)^2`` for ``tau >= 1``."""
    tau = _check_tau(tau)
    if tau < 1.0:
        raise DomainError(f"expansion holds only for tau >= 1, got {tau}")
    return 1.0 - _EXPANSION_COEFF * (tau - 1.0) ** 2


@dataclass(frozen=True)
class ThermoState:
    """Thermodynamic state at one scaled temperature.

    ``eps`` is ``-ln(fugacity)`` carried at full precision; prefer it to
    ``fugacity`` in numerical kernels.
    """

    tau: float
    fugacity: float
    eps: float
    condensate_fraction: float
    n_total: float
    convention: str = "integral"

    def __post_init__(self):
        if not self.tau > 0:
            raise DomainError("tau must be positive")
        if not 0.0 <= self.fugacity <= 1.0:
            raise DomainError("fugacity must lie in [0, 1]")
        if not 0.0 <= self.condensate_fraction <= 1.0:
            raise DomainError("condensate fraction must lie in [0, 1]")


def thermo_state(tau, convention="integral"):
    """Build the :class:`ThermoState` for ``tau``."""
    eps = fugacity_eps(tau)
    return ThermoState(
        tau=float(tau),
        fugacity=math.exp(-eps),
        eps=eps,
        condensate_fraction=condensate_fraction(tau),
        n_total=critical_density(convention),
        convention=convention,
    )
