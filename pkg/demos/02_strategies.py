"""
Gaussian strategies, their duals and risk
=========================================

A strategy is an amplitude over log-prices.  Its Fourier dual describes the
opposite side of the trade, and the risk operator trades the two widths
against each other.
"""

import numpy as np

from qmarket.strategy import (
    GaussianStrategy,
    GridWavefunction,
    fourier_dual,
    grid_risk_expectation,
    risk_expectation,
    supply_curve,
)

g = GaussianStrategy(a=0.3, width=0.5)
x = np.linspace(-1.5, 2.1, 7)
print("supply curve:", np.round(supply_curve(g, x), 4))

# a narrow demand strategy has a broad dual
psi = GridWavefunction.from_strategy(g, hbar_e=1.0)
dual = fourier_dual(psi)
print(f"norms     : {psi.norm():.12f} -> {dual.norm():.12f}")
print(f"variances : {psi.variance():.9f} -> {dual.variance():.9f} "
      f"(expected {1 / (4 * g.width):.9f})")

# risk of Gaussians of different width at risk_m = 1: minimal when width = 1/2
for width in (0.1, 0.25, 0.5, 1.0, 4.0):
    r = risk_expectation(GaussianStrategy(0.0, width), risk_m=1.0)
    print(f"width {width:4}: risk {r:.6f}")

# the grid operator agrees with the closed form
print("grid risk  :", grid_risk_expectation(psi, 1.0), "closed form:", risk_expectation(g, 1.0))
