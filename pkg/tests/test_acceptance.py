"""Acceptance criteria, one test each, at the stated tolerances and time limits.

Run alone with ``python3 -m pytest tests/test_acceptance.py`` (or
``python3 tests/test_acceptance.py``); the terminal summary then lists one
PASS/FAIL line per criterion with its runtime and the measured numbers.
"""

import math
import sys
import time

import numpy as np
import pytest

from bosescatter.cli import figure1_filename, main
from bosescatter.config import QuadratureConfig
from bosescatter.oracle import (build_box_model, stimulated_energy_balance, term2b_monte_carlo,
                                term2b_quadrature_3d)
from bosescatter.scattering import ScaledPoint, expected_sum_rule, rate, sum_rule, thermal_thermal_term
from bosescatter.bose_math import polylog_g32_eps, zeta_three_halves
from bosescatter.thermo import critical_density, fugacity, fugacity_eps, thermo_state

pytestmark = pytest.mark.acceptance


class Criterion:
    def __init__(self, record_property):
        self._record = record_property
        self._t0 = None
        self.runtime = math.nan

    def start(self, name):
        self._record("criterion", name)
        self._t0 = time.perf_counter()

    def stop(self, detail):
        self.runtime = time.perf_counter() - self._t0
        self._record("runtime", self.runtime)
        self._record("detail", detail)
        return self.runtime


@pytest.fixture
def crit(record_property):
    return Criterion(record_property)


def test_c1_above_critical_enhancement(crit):
    crit.start("1 above-critical enhancement")
    found = {}
    for conv in ("integral", "paper_constant"):
        cfg = QuadratureConfig(n_total_convention=conv)
        found[conv] = [(d, t, rate(d, t, cfg).total)
                       for d in (0.1, 0.3, 1.0) for t in (1.2, 1.5)]
    runtime = crit.stop("; ".join(
        f"{c}: R(0.3,1.2)={next(r for d, t, r in v if (d, t) == (0.3, 1.2)):.4f}"
        for c, v in found.items()))
    for conv, rows in found.items():
        assert any(2.0 <= r <= 5.0 for _, _, r in rows), conv
    assert runtime < 1.0


def test_c2_below_critical_jump(crit):
    crit.start("2 below-critical jump")
    r10 = rate(0.1, 1.0).total
    r08 = rate(0.1, 0.8).total
    peak = max(rate(0.1, t).total for t in np.linspace(0.75, 0.9, 16))
    runtime = crit.stop(f"R(0.1,1.0)={r10:.3f} R(0.1,0.8)={r08:.3f} ratio={r08 / r10:.3f} "
                        f"(need >= 20); max R on [0.75,0.9]={peak:.2f} (need > 100)")
    assert runtime < 5.0
    assert peak > 100.0
    assert r08 / r10 >= 20.0


def test_c3_continuity_at_critical(crit):
    crit.start("3 continuity at tau = 1")
    h = 1e-3
    out = []
    for d in (0.1, 0.3, 1.0):
        lo, mid, hi = (rate(d, t).total for t in (1 - h, 1.0, 1 + h))
        jump = abs(hi - lo) / mid
        up, down = (hi - mid) / h, (mid - lo) / h
        out.append((d, jump, up, down))
    runtime = crit.stop(" ".join(f"d={d}: jump={j:.3%} slopes {u:.4g}/{w:.4g}"
                                 for d, j, u, w in out))
    assert runtime < 10.0
    for d, jump, up, down in out:
        assert jump <= 0.05, d
        assert abs(up - down) <= 0.05 * max(abs(up), abs(down)), d


def test_c4_sum_rule(crit):
    crit.start("4 sum rule")
    n_total = critical_density("integral")
    ratios = {}
    for tau in (1.0, 1.5, 2.0):
        ratios[tau] = sum_rule(tau) / n_total
    for tau in (0.5, 0.8):
        ratios[tau] = sum_rule(tau) / (n_total * (1 - (1 - tau ** 1.5) ** 2))
        assert expected_sum_rule(tau) == pytest.approx(n_total * (1 - (1 - tau ** 1.5) ** 2))
    runtime = crit.stop(" ".join(f"tau={t}: {r:.8f}" for t, r in ratios.items()))
    assert runtime < 60.0
    for tau, ratio in ratios.items():
        assert ratio == pytest.approx(1.0, abs=0.01), tau


def test_c5_oracle_equivalence(crit):
    crit.start("5 oracle equivalence")
    worst_rel = 0.0
    worst_pull = 0.0
    for i, (d, t) in enumerate((d, t) for d in (0.1, 0.5, 2.0) for t in (0.8, 1.0, 1.5)):
        point, th = ScaledPoint(d, t), thermo_state(t)
        reduced, _ = thermal_thermal_term(point, th)
        quad3d, _ = term2b_quadrature_3d(point, th)
        mc, se = term2b_monte_carlo(point, th, samples=10**7, seed=1000 + i)
        rel = abs(reduced - quad3d) / quad3d
        pull = (mc - reduced) / se
        worst_rel = max(worst_rel, rel)
        worst_pull = max(worst_pull, abs(pull), key=abs)
        assert rel <= 5e-3, (d, t, rel)
        assert abs(pull) <= 3.0, (d, t, pull)
    runtime = crit.stop(f"max |1D-3D|/3D={worst_rel:.2e}, max |pull|={worst_pull:.2f}")
    assert runtime < 180.0


def test_c6_fugacity(crit):
    crit.start("6 fugacity correctness")
    zeta = zeta_three_halves()
    errs = []
    residuals = []
    for h in (0.05, 0.025, 0.0125):
        tau = 1 + h
        expansion = 1 - 9 / (16 * math.pi) * zeta ** 2 * h ** 2
        errs.append(abs(fugacity(tau) - expansion))
        residuals.append(abs(polylog_g32_eps(fugacity_eps(tau)) - zeta * tau ** -1.5))
    ratios = [errs[0] / errs[1], errs[1] / errs[2]]
    crit.stop(f"errors {errs[0]:.3e} {errs[1]:.3e} {errs[2]:.3e}, halving ratios "
              f"{ratios[0]:.3f} {ratios[1]:.3f} (cubic: 8), max residual {max(residuals):.1e}")
    assert errs[0] > errs[1] > errs[2]
    for r in ratios:
        assert 6.0 <= r <= 10.0
    assert max(residuals) < 1e-10


def test_c7_energy_balance(crit):
    crit.start("7 energy balance")
    out = []
    for tau in (0.8, 1.5):
        model = build_box_model(tau, 10.0, 16)  # 33^3 modes
        bal = stimulated_energy_balance(model)
        out.append((tau, bal.stimulated / bal.gross, bal.unstimulated))
    runtime = crit.stop(" ".join(f"tau={t}: stim/gross={r:.1e} unstim={u:.4g}"
                                 for t, r, u in out))
    assert runtime < 30.0
    for tau, rel, unstim in out:
        assert abs(rel) <= 1e-10
        assert unstim > 0.0


def test_c8_vanishing_enhancement(crit):
    crit.start("8 vanishing enhancement")
    cold = rate(1.0, 0.05).total
    far = rate(5.0, 1.5).total
    crit.stop(f"R(1,0.05)={cold:.7f} R(5,1.5)={far:.6f}")
    assert cold == pytest.approx(1.0, abs=1e-3)
    assert far == pytest.approx(1.0, rel=0.01)


def test_c9_determinism(crit, tmp_path):
    crit.start("9 determinism")
    a, b = tmp_path / "a", tmp_path / "b"
    codes = [main(["figure1", "--out", str(a)]), main(["figure1", "--out", str(b)])]
    same_csv = all((a / figure1_filename(d)).read_bytes() == (b / figure1_filename(d)).read_bytes()
                   for d in (0.03, 0.1, 0.3, 1.0))
    point, th = ScaledPoint(0.5, 1.2), thermo_state(1.2)
    mc = [term2b_monte_carlo(point, th, samples=10**6, seed=42) for _ in range(2)]
    crit.stop(f"figure1 CSV identical={same_csv}, MC identical={mc[0] == mc[1]}")
    assert codes == [0, 0]
    assert same_csv
    assert mc[0] == mc[1]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
