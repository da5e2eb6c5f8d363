"""Normalized light-scattering rate off a uniform ideal Bose gas.

The rate ``R(delta, tau)`` is split into

* the unstimulated (Rayleigh) part, normalized to 1;
* ``thermal_thermal``: Bose-enhanced scattering between occupied p != 0
  states, ``N_total^{-1} int d^3p n(p) n(p - delta)``;
* ``condensate``: transitions into and out of the p = 0 condensate,
  ``2 (N_0 / N_total) n(delta)``, present only for ``tau < 1``.

After integrating the polar angle analytically the thermal-thermal
integral becomes one dimensional::

    I = (2 pi tau / delta) int_0^inf dp p n(p)
          ln[(1 - lam e^{-(p+delta)^2/2tau}) / (1 - lam e^{-(p-delta)^2/2tau})]

and the log ratio equals ``log1p(-expm1(-2 p delta/tau) n((p-delta)^2))``,
which is what the kernel evaluates. :mod:`bosescatter.oracle` checks this
reduction against a direct two-dimensional quadrature.
"""

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

from scipy import integrate

from .config import QuadratureConfig
from .errors import ConvergenceError, DomainError
from .thermo import ThermoState, critical_density, thermo_state

__all__ = [
    "ScaledPoint",
    "RateBreakdown",
    "thermal_thermal_term",
    "condensate_term",
    "total_rate",
    "rate",
    "sweep_tau",
    "sweep_delta",
    "sum_rule",
    "expected_sum_rule",
    "SUM_RULE_DELTA_MIN",
    "FIGURE1_DELTAS",
]

# fixed breakpoints so the near-critical small-p peak is never stepped over
_SMALL_P_BREAKS = (1e-4, 1e-3, 1e-2, 1e-1)

SUM_RULE_DELTA_MIN = 1e-4
_SUM_RULE_DELTA_MAX = 30.0
_SUM_RULE_REL_TOL = 1e-6

FIGURE1_DELTAS = (0.03, 0.1, 0.3, 1.0)


@dataclass(frozen=True)
class ScaledPoint:
    """Dimensionless momentum transfer ``delta`` and temperature ``tau = T/T_c``."""

    delta: float
    tau: float

    def __post_init__(self):
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise DomainError("delta must be positive")
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise DomainError("tau must be positive")


@dataclass(frozen=True)
class RateBreakdown:
    delta: float
    tau: float
    unstimulated: float
    thermal_thermal: float
    condensate: float
    total: float
    quadrature_error: float

    def as_dict(self):
        return asdict(self)


def _quad(func, a, b, points, config, term):
    points = sorted({x for x in points if a < x < b})
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, abserr, info = integrate.quad(
            func, a, b, points=points or None, epsabs=0.0, epsrel=config.rel_tol,
            limit=config.max_subdivisions, full_output=1)[:3]
    if not math.isfinite(value) or abserr > max(config.rel_tol * abs(value), 1e-300):
        raise ConvergenceError(
            f"{term}: quadrature error {abserr:.3e} exceeds tolerance on value {value:.6e}",
            term=term)
    return value, abserr


def _bose(x):
    # 1/(e^x - 1) for x > 0 without overflow
    if x < 1.0:
        return 1.0 / math.expm1(x)
    return math.exp(-x) / -math.expm1(-x)


def _thermal_integrand(delta, tau, eps):
    two_tau = 2.0 * tau
    at_zero = 4.0 * delta * _bose(delta * delta / two_tau) if eps == 0.0 else 0.0

    def f(p):
        if p == 0.0:
            return at_zero
        y = (p - delta) ** 2 / two_tau + eps
        if y == 0.0:
            return math.inf
        ratio = -math.expm1(-2.0 * p * delta / tau) * _bose(y)
        return p * _bose(p * p / two_tau + eps) * math.log1p(ratio)

    return f


def momentum_cutoff(tau, config):
    return math.sqrt(2.0 * tau) * config.p_truncation_multiplier


def thermal_thermal_term(point, thermo, config=None):
    """Bose-enhanced scattering between thermally occupied states.

    Returns ``(value, abserr)``: the double occupation integral divided by
    ``N_total``, and the absolute quadrature error estimate.
    """
    config = config or QuadratureConfig()
    _check_consistent(point, thermo)
    delta, tau = point.delta, point.tau
    upper = momentum_cutoff(tau, config) + delta
    value, err = _quad(_thermal_integrand(delta, tau, thermo.eps), 0.0, upper,
                       _SMALL_P_BREAKS + (delta,), config, "thermal_thermal")
    scale = 2.0 * math.pi * tau / delta / thermo.n_total
    return value * scale, err * scale


def condensate_term(point, thermo):
    """Scattering between the condensate and the state at momentum ``delta``.

    ``2 f_0 / (exp(delta^2 / 2 tau) - 1)``: out of p = 0 and into it, with
    equal weight. Zero for ``tau >= 1``.
    """
    _check_consistent(point, thermo)
    if thermo.condensate_fraction == 0.0:
        return 0.0
    return 2.0 * thermo.condensate_fraction * _bose(point.delta ** 2 / (2.0 * point.tau))


def _check_consistent(point, thermo):
    if not isinstance(thermo, ThermoState) or thermo.tau != point.tau:
        raise DomainError("thermo state does not match the point's tau")


def total_rate(point, config=None):
    """Evaluate all three terms at ``point``; see :class:`RateBreakdown`."""
    config = config or QuadratureConfig()
    thermo = thermo_state(point.tau, config.n_total_convention)
    tt, err = thermal_thermal_term(point, thermo, config)
    cond = condensate_term(point, thermo)
    return RateBreakdown(
        delta=point.delta, tau=point.tau, unstimulated=1.0, thermal_thermal=tt,
        condensate=cond, total=1.0 + tt + cond, quadrature_error=err)


def rate(delta, tau, config=None):
    """Shorthand for ``total_rate(ScaledPoint(delta, tau), config)``."""
    return total_rate(ScaledPoint(delta, tau), config)


def _safe_rate(point, config):
    try:
        return total_rate(point, config)
    except (ConvergenceError, DomainError) as exc:
        return exc


def _sweep(points, config, max_workers):
    config = config or QuadratureConfig()
    if max_workers is None or max_workers <= 1:
        return [_safe_rate(pt, config) for pt in points]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(lambda pt: _safe_rate(pt, config), points))


def _check_increasing(grid, name):
    grid = [float(x) for x in grid]
    if not grid:
        raise DomainError(f"{name} grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError(f"{name} grid must be strictly increasing")
    return grid


def sweep_tau(delta, tau_grid, config=None, max_workers=None):
    """Rates along a temperature grid at fixed ``delta``.

    Returns ``[(tau, result), ...]`` in grid order, where ``result`` is a
    :class:`RateBreakdown` or the exception raised at that point.
    """
    grid = _check_increasing(tau_grid, "tau")
    points = [ScaledPoint(delta, t) for t in grid]
    return list(zip(grid, _sweep(points, config, max_workers)))


def sweep_delta(tau, delta_grid, config=None, max_workers=None):
    """Rates along a momentum-transfer grid at fixed ``tau``; see :func:`sweep_tau`."""
    grid = _check_increasing(delta_grid, "delta")
    points = [ScaledPoint(d, tau) for d in grid]
    return list(zip(grid, _sweep(points, config, max_workers)))


def expected_sum_rule(tau, convention="integral"):
    """Closed-form angle-integrated enhancement.

    ``N_thermal^2 / N_total`` from thermal-thermal scattering plus
    ``2 N_0 N_thermal / N_total`` from the condensate term, i.e.
    ``N_int^2 / N_total (1 - (1 - tau^{3/2})^2)`` with ``N_int`` the
    integral-convention density. The ``N_0^2`` piece sits at zero angle.
    """
    f0 = max(0.0, 1.0 - float(tau) ** 1.5)
    n_int = critical_density("integral")
    return n_int ** 2 / critical_density(convention) * (1.0 - f0 ** 2)


def sum_rule(tau, config=None):
    """``4 pi int delta^2 (R - 1) d delta`` evaluated numerically.

    The outer integral runs over ``[1e-4, max(30, 2 p_max)]``; the condensate
    term's ``4 tau f_0 / delta^2`` small-delta tail is added in closed form
    below ``1e-4``.
    """
    config = config or QuadratureConfig()
    thermo = thermo_state(tau, config.n_total_convention)
    tau = thermo.tau

    def integrand(delta):
        pt = ScaledPoint(delta, tau)
        tt, _ = thermal_thermal_term(pt, thermo, config)
        return delta * delta * (tt + condensate_term(pt, thermo))

    d_min = SUM_RULE_DELTA_MIN
    d_max = max(_SUM_RULE_DELTA_MAX, 2.0 * momentum_cutoff(tau, config))
    scale = math.sqrt(tau)
    breaks = (1e-3, 1e-2, 0.1 * scale, 0.5 * scale, scale, 3.0 * scale)
    outer = QuadratureConfig(rel_tol=max(config.rel_tol, _SUM_RULE_REL_TOL),
                             max_subdivisions=config.max_subdivisions,
                             n_total_convention=config.n_total_convention,
                             p_truncation_multiplier=config.p_truncation_multiplier)
    value, _ = _quad(integrand, d_min, d_max, breaks, outer, "sum_rule")
    patch = 4.0 * tau * thermo.condensate_fraction * d_min
    return 4.0 * math.pi * (value + patch)
