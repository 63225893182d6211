"""
Shape of the joint spectrum
===========================

With a very short fiber and a broad pump the phasematching function is
nearly flat and the pump envelope picks out a thin slab around
w_r + w_s + w_i = w_p. This is the visualisation preset.
"""

import numpy as np

from tospdc import design_point, figure2_design, jsi_grid

fig = figure2_design(design_point())
print(f"preset: L = {fig.length * 1e6:.1f} um, sigma = {fig.pump.sigma:.2e} rad/s")

jsi = jsi_grid(fig, n_points=31)
ax = jsi.axes[0]
step = ax[1] - ax[0]
i, j, k = np.unravel_index(np.argmax(jsi.values), jsi.values.shape)
print(f"brightest cell sum offset from w_p: {(ax[i] + ax[j] + ax[k] - fig.omega_p) / step:+.1f} grid steps")

# intensity along the sum direction versus along a difference direction
centre = (ax.size - 1) // 2
diagonal = [jsi.values[n, n, n] for n in range(ax.size)]
across = [jsi.values[n, ax.size - 1 - n, centre] for n in range(ax.size)]
print(f"sum direction falls to {diagonal[centre + 5] / diagonal[centre]:.2e} five steps out")
print(f"difference direction stays at {across[centre + 5] / across[centre]:.3f}")

pm = jsi_grid(fig, n_points=31, kind="PM").values
print(f"|PM| ranges over [{np.abs(pm).min():.5f}, {np.abs(pm).max():.5f}]")
