"""
Quantum correlations of a dimer versus temperature
==================================================

The thermal state of an isotropic spin-1/2 dimer is a Werner state, so every
two-qubit correlation measure is a function of a single number, the
normalized moment x = 4/(3 + exp(-J/T)). That number is also what a
susceptibility measurement delivers, through x = 2 k_B T chi / (mu_0 N_A
(g mu_B)^2). This script tabulates the measures for J = -748.5 K and marks
where entanglement dies while discord survives.
"""

import numpy as np

from spindimer import REFERENCE_PARAMS
from spindimer.dimer import model_moment, normalized_moment, susceptibility
from spindimer.measures import correlation_table
from spindimer.thresholds import entanglement_temperature

T = np.geomspace(2, 1e4, 400)

# Going through chi on purpose: this is the route an experiment takes.
chi = susceptibility(REFERENCE_PARAMS, T)
x = normalized_moment(REFERENCE_PARAMS, chi, T)
assert np.allclose(x, model_moment(REFERENCE_PARAMS, T), rtol=1e-12)

table = correlation_table(x, T)
T_e = entanglement_temperature(REFERENCE_PARAMS)

print(f"{'T (K)':>9} {'x':>8} {'C':>8} {'EoF':>8} {'Q_E':>8} {'Q_G':>8}")
for t in (10, 100, 221, 300, 500, round(T_e), 1000, 2300, 9500):
    i = int(np.argmin(np.abs(T - t)))
    print(f"{T[i]:9.1f} {table['x'][i]:8.5f} {table['concurrence'][i]:8.5f} "
          f"{table['eof'][i]:8.5f} {table['entropic_discord'][i]:8.5f} "
          f"{table['geometric_discord'][i]:8.5f}")

# Above T_e the concurrence is exactly zero yet both discords are finite.
above = T > T_e
print(f"\nabove T_e = {T_e:.1f} K: max concurrence {table['concurrence'][above].max():.1e}, "
      f"min entropic discord {table['entropic_discord'][above].min():.4f}")

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots()
    ax.plot(T, table["entropic_discord"], "r-", label="entropic discord")
    ax.plot(T, table["geometric_discord"], "k--", label="geometric discord")
    ax.plot(T, table["eof"], "b:", label="entanglement of formation")
    ax.axvline(T_e, color="0.6", lw=0.8)
    ax.set_xscale("log")
    ax.set_xlabel("T (K)")
    ax.set_ylabel("correlation")
    ax.legend()
    plt.show()
