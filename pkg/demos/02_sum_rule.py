"""
Angle-integrated enhancement
============================

Integrating R - 1 over all momentum transfers removes the angular
redistribution and leaves a number fixed by the density. Above T_c it is the
critical density itself; below, the condensate-condensate pair drops out and
the value is N_total (1 - f0^2), with f0 the condensate fraction.
"""

from bosescatter.scattering import expected_sum_rule, sum_rule
from bosescatter.thermo import critical_density

n_total = critical_density("integral")
print(f"N_total = {n_total:.6f}")
for tau in (0.5, 0.8, 1.0, 1.5, 2.0):
    value = sum_rule(tau)
    print(f"tau = {tau:3.1f}   integral = {value:10.6f}   "
          f"expected = {expected_sum_rule(tau):10.6f}   ratio = {value / expected_sum_rule(tau):.8f}")
