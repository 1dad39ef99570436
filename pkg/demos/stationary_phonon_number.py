"""
How cold does it get?
=====================

The stationary mean phonon number three ways: the closed form for any Rabi
frequency, a stationary solve of the 23 rate equations, and the limit formulas
for weak and strong confinement.
"""
import numpy as np

from sideband_cooling import PhysParams, classify_regime
from sideband_cooling import analytic as an
from sideband_cooling import rate_eqs as re

# %%
# Weak confinement: the trap frequency is a hundredth of the linewidth.  The
# best detuning is half a linewidth and the particle ends with many phonons.
weak = PhysParams(eta=1e-3, nu=0.01, gamma=1.0, omega=1e-3, delta=0.5)
print(classify_regime(weak).tag)
print("closed form      ", an.m_ss_full(weak))
print("rate equations   ", re.stationary_phonon_number(weak))
print("Gamma theta/4 nu ", an.m_ss_weak_optimal(weak))

# %%
# Strong confinement: resolved sidebands.  Tuning onto the red sideband
# leaves a small fraction of a phonon.
strong = PhysParams(eta=1e-3, nu=1.0, gamma=0.01, omega=1e-3, delta=1.0, unit="nu")
print(classify_regime(strong).tag)
print("closed form      ", an.m_ss_full(strong))
print("rate equations   ", re.stationary_phonon_number(strong))
print("sideband limit   ", an.m_ss_sideband(strong))

# %%
# The detuning that minimises m_ss moves from Gamma/2 to nu as the trap gets
# stiffer.  Between the regimes there is no closed form, so search a grid.
for nu in (0.01, 0.1, 1.0, 10.0):
    p = PhysParams(eta=1e-3, nu=nu, gamma=1.0, omega=1e-3)
    best = an.grid_search_detuning(p, np.geomspace(1e-2, 30, 3000))
    print(f"nu = {nu:5}: best delta = {best:.3f}")

# %%
# Blue detuning heats: m_ss comes out negative and is flagged rather than
# clipped.
print(an.cooling_summary(weak.replace(delta=-0.5)).heating)
