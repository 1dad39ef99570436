"""
Cooling curves
==============

Integrates the 23 rate equations from a Fock state and compares the mean
phonon number with the exponential approach m(t) = (m0 - m_ss) exp(-gamma_c t) + m_ss.
"""
import numpy as np

from sideband_cooling import analytic as an, presets
from sideband_cooling import rate_eqs as re

# %%
# The cooling time 1/gamma_c is 10^6 - 10^8 times longer than 1/Gamma, so the
# integration uses the exact matrix-exponential propagator of the linear system.
for key, p in presets.FIG5.items():
    g = re.assemble_generator(p)
    m0 = presets.FIG5_M0[key]
    gc = an.gamma_c_full(p)
    ts = re.integrate(g, re.initial_state("fock", m0), 10 / p.gamma + 3 / gc,
                      method="exact", max_samples=7)
    closed = an.mean_phonon_trajectory(m0, an.m_ss_full(p), gc, ts.times)
    print(f"({key}) gamma_c = {gc:.3g}")
    for t, m, mc in zip(ts.times, ts.m, closed):
        print(f"   t = {t:10.4g}   m = {m:10.5g}   closed form {mc:10.5g}")

# %%
# On short time scales fixed-step RK4 and the adaptive integrator agree with
# the exact propagator.
p = presets.FIG6
g = re.assemble_generator(p)
s0 = re.initial_state("coherent", beta=1.0)
for method in ("rk4", "adaptive", "exact"):
    ts = re.integrate(g, s0, 20.0, method=method, max_samples=3)
    print(method, ts.m)
