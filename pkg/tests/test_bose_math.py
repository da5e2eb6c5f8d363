import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosescatter.bose_math import (g32_series, occupation, polylog_g32, polylog_g32_eps,
                                   zeta, zeta_three_halves)
from bosescatter.errors import DomainError


def test_zeta_three_halves_quoted_value():
    assert abs(zeta_three_halves() - 2.61) < 0.005


def test_zeta_three_halves_bracketed_by_series_with_integral_tails():
    # S_N + 2/sqrt(N+1) <= zeta(3/2) <= S_N + 2/sqrt(N)
    n = 10**6
    partial = math.fsum(1.0 / np.arange(1, n + 1, dtype=float) ** 1.5)
    lower = partial + 2.0 / math.sqrt(n + 1)
    upper = partial + 2.0 / math.sqrt(n)
    assert lower <= zeta_three_halves() <= upper
    assert upper - lower < 1e-8
    assert zeta_three_halves() == pytest.approx(2.612375348685, abs=1e-12)


@pytest.mark.parametrize("s", [1.5, 2.0, 3.5, 0.5, -0.5, -1.5, -4.5, -12.5, -23.5])
def test_zeta_against_mpmath(s):
    assert zeta(s) == pytest.approx(float(mpmath.zeta(s)), rel=1e-13)


def test_zeta_pole():
    with pytest.raises(DomainError):
        zeta(1.0)


def test_g32_endpoints():
    assert polylog_g32(0.0) == 0.0
    assert polylog_g32(1.0) == pytest.approx(zeta_three_halves(), rel=1e-12)


def test_g32_half_against_truncated_series():
    n = np.arange(1, 51, dtype=float)
    partial = math.fsum(0.5 ** n / n ** 1.5)
    tail = 0.5 ** 51 / (51 ** 1.5 * 0.5)
    slack = 1e-14  # rounding in the two summation orders
    assert partial - slack <= polylog_g32(0.5) <= partial + tail + slack
    assert polylog_g32(0.5) == pytest.approx(0.62483, abs=1e-4)


@pytest.mark.parametrize("lam", [1e-6, 0.05, 0.3, 0.36, 0.37, 0.5, 0.8, 0.99, 0.999999, 1 - 1e-12])
def test_g32_against_mpmath(lam):
    with mpmath.workdps(30):
        ref = float(mpmath.polylog(1.5, mpmath.mpf(lam)))
    assert polylog_g32(lam) == pytest.approx(ref, rel=1e-10)


def test_g32_eps_near_one_keeps_precision():
    eps = 1e-10
    with mpmath.workdps(40):
        ref = float(mpmath.polylog(1.5, mpmath.exp(-mpmath.mpf(eps))))
    assert polylog_g32_eps(eps) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("lam", [-0.1, 1.0000001, math.nan])
def test_g32_domain(lam):
    with pytest.raises(DomainError):
        polylog_g32(lam)


@pytest.mark.parametrize("lam", [0.2, 0.7, 0.95])
def test_series_cutoff_doubling_within_tail_bound(lam):
    for n in (20, 80, 300):
        s1, tail = g32_series(lam, n)
        s2, _ = g32_series(lam, 2 * n)
        assert -1e-15 <= s2 - s1 <= tail + 4 * np.spacing(s2)


def test_series_at_one_uses_integral_tail():
    s1, tail = g32_series(1.0, 1000)
    assert tail == pytest.approx(2.0 / math.sqrt(1000))
    assert s1 < zeta_three_halves() < s1 + tail


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_g32_strictly_increasing(a, b):
    if a == b:
        return
    a, b = min(a, b), max(a, b)
    assert polylog_g32(a) < polylog_g32(b)


def test_occupation_examples():
    assert occupation(2.0 * 0.7 * math.log(2.0), 0.7, 1.0) == pytest.approx(1.0, rel=1e-14)
    assert occupation(0.01, 1.0, 1.0) == pytest.approx(199.50, abs=0.01)
    # direct evaluation loses digits here; expm1 does not
    assert occupation(0.01, 1.0, 1.0) == pytest.approx(1.0 / math.expm1(0.005), rel=1e-15)
    assert occupation(1e4, 1.0, 0.9) == 0.0


def test_occupation_small_p_divergence():
    tau = 0.8
    p2 = 1e-8
    assert p2 * occupation(p2, tau, 1.0) == pytest.approx(2.0 * tau, rel=1e-3)


def test_occupation_vectorised():
    p2 = np.array([0.1, 1.0, 10.0])
    out = occupation(p2, 1.3, 0.7)
    expected = 1.0 / (np.exp(p2 / 2.6) / 0.7 - 1.0)
    np.testing.assert_allclose(out, expected, rtol=1e-13)


def test_occupation_domain():
    with pytest.raises(DomainError):
        occupation(0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        occupation(1.0, 0.0, 0.5)
    with pytest.raises(DomainError):
        occupation(1.0, 1.0, 1.5)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-6, 50.0), st.floats(1e-6, 50.0), st.floats(0.05, 5.0), st.floats(0.0, 1.0))
def test_occupation_nonnegative_and_decreasing(p_a, p_b, tau, lam):
    lo, hi = min(p_a, p_b), max(p_a, p_b)
    n_lo = occupation(lo, tau, lam)
    n_hi = occupation(hi, tau, lam)
    assert n_hi >= 0.0
    assert n_lo >= n_hi
