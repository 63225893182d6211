"""
Phasematching a silica nanofiber for photon triplets
=====================================================

A pump photon in the HE12 mode splits into three photons in HE11 when
k_HE12(3w) = 3 k_HE11(w). Only the fiber radius is free, so for each
triplet wavelength there is one radius that does the job.
"""

import numpy as np

from tospdc import HE11, HE12, FiberSpec, Spectral, find_phasematch_radius, phasematch_scan, solve_mode

# the design point: triplets at 1.596 um, pump at 532 nm
sol = find_phasematch_radius(Spectral.from_wavelength(1.596e-6))
print(f"phasematching radius: {sol.fiber_radius * 1e6:.4f} um, residual {sol.residual:.1e} rad/m")

fiber = FiberSpec(sol.fiber_radius)
pump = solve_mode(fiber, sol.pump_freq, HE12)
photon = solve_mode(fiber, sol.degenerate_freq, HE11)
print(f"HE12 at 532 nm : n_eff = {pump.n_eff:.8f}, V = {pump.v_number:.3f}")
print(f"HE11 at 1596 nm: n_eff = {photon.n_eff:.8f}, V = {photon.v_number:.3f}")

# the pump mode has one radial node, which is what makes free-space coupling lossy
f0 = pump.amplitude
node = pump.radius[np.flatnonzero(np.diff(np.sign(f0)))[0]]
print(f"HE12 radial node near r = {node * 1e6:.3f} um (core radius {fiber.core_radius * 1e6:.3f} um)")

# radius vs wavelength: thinner fibers for shorter triplet wavelengths
wavelengths = np.linspace(1.2e-6, 1.8e-6, 7)
print("\nwavelength_um  radius_um")
for lam, s in zip(wavelengths, phasematch_scan(wavelengths)):
    print(f"{lam * 1e6:13.3f}  {s.fiber_radius * 1e6:9.4f}")
