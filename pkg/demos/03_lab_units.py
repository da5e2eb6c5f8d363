"""
From a detector angle to a dimensionless transfer
=================================================

A rubidium-87 cloud with T_c = 100 nK probed at 780 nm. The photon momentum
is about 1.9 in units of sqrt(m k_B T_c), so milliradian angles already reach
the small-delta regime where the enhancement is large.
"""

import math

from bosescatter import ScaledPoint
from bosescatter.lab_units import (LabParameters, delta_from_angle, heating_reduction_factor,
                                   polarization_factor, scaled_photon_momentum)

params = LabParameters.from_lab(mass_amu=87.0, wavelength_nm=780.0, tc_nk=100.0)
k = scaled_photon_momentum(params)
print(f"k = {k:.5f}")

for mrad in (1, 10, 50, 200):
    theta = mrad * 1e-3
    print(f"theta = {mrad:4d} mrad  ->  delta = {delta_from_angle(theta, k):.6f}")

# Heating is set by the isotropic part of the rate. Detecting at a small
# angle instead of at 90 degrees lets the probe intensity drop by R(small)/R(90).
tau = 0.85
small = ScaledPoint(0.1, tau)
side = ScaledPoint(delta_from_angle(math.pi / 2, k), tau)
print(f"heating reduction at tau = {tau}: {heating_reduction_factor(small, side):.1f}")

# Bare dipole pattern at 90 degrees for each incident polarization.
for mode in ("in_plane", "perpendicular", "unpolarized"):
    print(f"{mode:>13}: {polarization_factor(math.pi / 2, mode):.3f}")
