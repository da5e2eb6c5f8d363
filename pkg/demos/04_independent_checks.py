"""
Cross-checking the thermal-thermal term
=======================================

The production code reduces the six-dimensional pair integral to one radial
quadrature. Here the same number is obtained three other ways: a nested
radial/polar quadrature, importance-sampled Monte Carlo, and a direct sum
over the modes of a finite periodic box.
"""

from bosescatter import ScaledPoint, rate, thermo_state
from bosescatter.oracle import (box_model_for_delta, box_rate, build_box_model,
                                stimulated_energy_balance, term2b_monte_carlo,
                                term2b_quadrature_3d)
from bosescatter.scattering import thermal_thermal_term

delta, tau = 0.5, 1.2
point, thermo = ScaledPoint(delta, tau), thermo_state(tau)

reduced, _ = thermal_thermal_term(point, thermo)
nested, _ = term2b_quadrature_3d(point, thermo)
mc, se = term2b_monte_carlo(point, thermo, samples=2_000_000, seed=7)
print(f"reduced 1D   {reduced:.10f}")
print(f"nested 2D    {nested:.10f}")
print(f"Monte Carlo  {mc:.10f} +/- {se:.1e}   pull {(mc - reduced) / se:+.2f}")

# The box sums n_i (n_f + 1) directly. Doubling the box side (with delta
# kept on the lattice) walks the result onto the continuum value.
continuum = rate(delta, tau).total
for m in (1, 2, 4):
    model = box_model_for_delta(delta, tau, modes_per_delta=m, max_mode=17 * m)
    print(f"box L = {model.box_scale:7.3f}: R = {box_rate(model, (0, 0, m)):.8f}"
          f"   continuum {continuum:.8f}")

# Stimulated transitions move atoms both ways with equal weight, so they
# carry no net energy; the bare term always heats.
bal = stimulated_energy_balance(build_box_model(0.8, 10.0, 16))
print(f"stimulated / gross energy flow: {bal.stimulated / bal.gross:.1e}")
print(f"recoil heating (bare term):     {bal.unstimulated:.4e}")
