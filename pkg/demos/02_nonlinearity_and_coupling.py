"""
Nonlinear strength and pump coupling
====================================

The Kerr overlap of one HE12 pump field with three HE11 photon fields sets
the effective area and gamma. Only the silica core is nonlinear. We also
check how much of a focused Gaussian beam lands in HE12.
"""

import numpy as np

from tospdc import design_point, gaussian_coupling, maximize_coupling, nonlinear_phase, solve_mode
from tospdc.fibermodes import HE12

design = design_point()
nl = design.nonlinear
print(f"A_eff = {nl.a_eff * 1e12:.2f} um^2")
print(f"gamma = {nl.gamma * 1e3:.2f} /(W km) with chi3 = {nl.chi3:.1e} m^2/V^2")

# self- and cross-phase modulation, and whether they matter over 10 cm at 20 W peak
phi = nonlinear_phase(nl, design.pump.peak_power)
print(f"gamma_p = {nl.gamma_p:.3f}, gamma_pr = {nl.gamma_pr:.4f} /(W m)")
print(f"Phi_NL * L = {phi * design.length:.3f} rad, compared with pi")

pump = solve_mode(design.fiber, design.phasematch.pump_freq, HE12)
print("\nwaist_um  coupling")
for w in np.linspace(0.4e-6, 1.4e-6, 6):
    print(f"{w * 1e6:8.2f}  {gaussian_coupling(pump, w):.4f}")
waist, frac = maximize_coupling(pump)
print(f"best waist {waist * 1e6:.3f} um couples {frac:.1%} of the power")
