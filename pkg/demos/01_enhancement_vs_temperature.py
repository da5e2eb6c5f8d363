"""
Enhancement factor across the condensation point
================================================

Sweep the scaled temperature tau = T/T_c at four fixed momentum transfers
and print the total rate next to the piece carried by the condensate.
"""

import numpy as np

from bosescatter import sweep_tau
from bosescatter.scattering import FIGURE1_DELTAS

taus = np.linspace(0.6, 2.0, 15)

# Each row of a sweep is (tau, RateBreakdown); a failed point would hold the
# exception instead, so check before using the numbers.
for delta in FIGURE1_DELTAS:
    print(f"\ndelta = {delta}")
    print(f"{'tau':>6} {'total':>12} {'condensate':>12}")
    for tau, r in sweep_tau(delta, taus):
        print(f"{tau:6.2f} {r.total:12.4f} {r.condensate:12.4f}")

# Above T_c the stimulated part is a modest factor; below it the condensate
# term grows like 1/delta^2 and takes over at small angles.
