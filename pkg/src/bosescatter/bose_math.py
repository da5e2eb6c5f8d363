"""Special functions for the ideal Bose gas.

Everything here is a pure function of its arguments. Fugacities are plain
floats in ``[0, 1]``; many routines also accept the equivalent
``eps = -ln(lambda) >= 0``, which keeps full relative precision when the
fugacity is within ~1e-8 of one (the near-critical regime).
"""

import math

import numpy as np

from .errors import DomainError

__all__ = [
    "zeta",
    "zeta_three_halves",
    "polylog_g32",
    "polylog_g32_eps",
    "g32_series",
    "occupation",
    "occupation_eps",
    "bose_factor",
    "check_fugacity",
]

# B_2, B_4, ..., B_20
_BERNOULLI_EVEN = (
    1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
    -3617 / 510, 43867 / 798, -174611 / 330,
)
_EM_CUTOFF = 20


def _zeta_euler_maclaurin(s):
    # Valid for any real s != 1; used for s >= 1/2 where it is well conditioned.
    n = _EM_CUTOFF
    total = math.fsum(k ** -s for k in range(1, n))
    total += n ** (1 - s) / (s - 1) + 0.5 * n ** -s
    rising = s  # s (s+1) ... (s+2j-2)
    factorial = 2.0  # (2j)!
    for j, b2j in enumerate(_BERNOULLI_EVEN, start=1):
        total += b2j / factorial * rising * n ** (-s - 2 * j + 1)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        factorial *= (2 * j + 1) * (2 * j + 2)
    return total


def zeta(s):
    """Riemann zeta function for real ``s != 1``.

    Euler-Maclaurin summation for ``s >= 1/2`` and the functional equation
    below that. Accurate to roughly machine precision on ``[-25, 30]``,
    which covers every use in this package.
    """
    s = float(s)
    if s == 1.0:
        raise DomainError("zeta has a pole at s = 1")
    if s >= 0.5:
        return _zeta_euler_maclaurin(s)
    if s == math.floor(s) and s < 0 and int(s) % 2 == 0:
        return 0.0  # trivial zeros
    return (2 ** s * math.pi ** (s - 1) * math.sin(math.pi * s / 2)
            * math.gamma(1 - s) * _zeta_euler_maclaurin(1 - s))


_ZETA_3_2 = zeta(1.5)


def zeta_three_halves():
    """Return zeta(3/2) = 2.6123753486854883..."""
    return _ZETA_3_2


# Expansion of g_{3/2}(e^{-eps}) about eps = 0:
#   g = Gamma(-1/2) sqrt(eps) + sum_k zeta(3/2 - k) (-eps)^k / k!
# The coefficients fall off like (2 pi)^-k, so 25 terms reach double
# precision for eps <= 1.
_ROBINSON_TERMS = 25
_ROBINSON_COEFFS = tuple(
    zeta(1.5 - k) * (-1) ** k / math.factorial(k) for k in range(_ROBINSON_TERMS)
)
_ROBINSON_MAX_EPS = 1.0


def g32_series(lam, n_terms):
    """Partial sum of ``sum_{n<=N} lam^n / n^{3/2}`` and a bound on the tail.

    The tail bound is ``lam^{N+1} / ((N+1)^{3/2} (1 - lam))`` for
    ``lam < 1`` and the integral bound ``2 / sqrt(N)`` at ``lam == 1``.
    """
    lam = check_fugacity(lam)
    if n_terms < 1:
        raise DomainError("n_terms must be positive")
    n = np.arange(1, n_terms + 1, dtype=float)
    partial = math.fsum(lam ** n / n ** 1.5)
    if lam == 1.0:
        tail = 2.0 / math.sqrt(n_terms)
    else:
        tail = lam ** (n_terms + 1) / ((n_terms + 1) ** 1.5 * (1.0 - lam))
    return partial, tail


def _g32_direct(lam):
    total = 0.0
    term_power = 1.0
    n = 0
    while True:
        n += 1
        term_power *= lam
        total += term_power / n ** 1.5
        tail = term_power * lam / ((n + 1) ** 1.5 * (1.0 - lam))
        if tail <= 1e-17 * total or term_power == 0.0:
            return total


def polylog_g32_eps(eps):
    """Bose function g_{3/2} evaluated at fugacity ``exp(-eps)``, ``eps >= 0``."""
    eps = float(eps)
    if not eps >= 0.0:
        raise DomainError(f"eps = -ln(fugacity) must be >= 0, got {eps}")
    if math.isinf(eps):
        return 0.0
    if eps < _ROBINSON_MAX_EPS:
        acc = 0.0
        for c in reversed(_ROBINSON_COEFFS):
            acc = acc * eps + c
        return acc - 2.0 * math.sqrt(math.pi * eps)
    return _g32_direct(math.exp(-eps))


def polylog_g32(lam):
    """Bose function ``g_{3/2}(lam) = sum_n lam^n / n^{3/2}`` for ``0 <= lam <= 1``.

    Relative error is below 1e-13 over the whole domain.

    >>> round(polylog_g32(0.5), 5)
    0.62484
    """
    lam = check_fugacity(lam)
    if lam == 0.0:
        return 0.0
    if lam == 1.0:
        return _ZETA_3_2
    return polylog_g32_eps(-math.log(lam))


def check_fugacity(lam):
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"fugacity must lie in [0, 1], got {lam}")
    return lam


def bose_factor(x):
    """``1 / (exp(x) - 1)`` for ``x > 0``, stable as ``x -> 0`` and free of overflow."""
    x = np.asarray(x, dtype=float)
    small = np.minimum(x, 1.0)
    large = np.maximum(x, 1.0)
    with np.errstate(divide="ignore"):
        out = np.where(x < 1.0, 1.0 / np.expm1(small), np.exp(-large) / -np.expm1(-large))
    return out if out.ndim else float(out)


def occupation_eps(p_squared, tau, eps):
    """Mean occupancy ``1/(exp(p^2/(2 tau) + eps) - 1)``.

    Array-friendly; raises :class:`DomainError` where the exponent is not
    strictly positive (the p = 0 state at fugacity one).
    """
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    x = np.asarray(p_squared, dtype=float) / (2.0 * tau) + eps
    if np.any(x <= 0):
        raise DomainError("occupation diverges: p^2 = 0 at fugacity 1")
    return bose_factor(x)


def occupation(p_squared, tau, lam):
    """Mean Bose occupancy ``1/(lam^{-1} exp(p^2/(2 tau)) - 1)``.

    Parameters
    ----------
    p_squared : float or array_like
        Squared momentum in units of ``m k_B T_c``.
    tau : float
        Scaled temperature ``T / T_c``.
    lam : float
        Fugacity in ``[0, 1]``.
    """
    lam = check_fugacity(lam)
    if lam == 0.0:
        out = np.zeros_like(np.asarray(p_squared, dtype=float))
        return out if out.ndim else 0.0
    return occupation_eps(p_squared, tau, -math.log(lam))
