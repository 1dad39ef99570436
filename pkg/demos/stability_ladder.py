"""
Why second order in eta is needed
=================================

The five weak-confinement equations for (n2, k7, k8, k9, k10) at successive
orders in the Lamb-Dicke parameter.  Without recoil the phonon state only
rotates; first-order terms shift it; only the second-order terms damp it.
"""
import numpy as np

from sideband_cooling import presets
from sideband_cooling import rate_eqs as re
from sideband_cooling.stability import rotation_check, spectrum

p = presets.FIG1
sys_ = re.reduced_weak_system(p)
s0 = re.initial_state("coherent", beta=1.0)[[re.IDX[k] for k in re.REDUCED_NAMES]]

# %%
for order in (0, 1, 2):
    rep = spectrum(sys_, order)
    print(order, rep.classification, np.round(rep.eigenvalues, 12))

# %%
# At order zero (k7, k8) and (k9, k10) run on circles at nu and 2 nu.
ts = re.integrate_reduced(sys_.truncated(0), s0, 10 * 2 * np.pi / p.nu, n_samples=2001)
print(rotation_check(ts))

# %%
# At second order the shifted variables decay on the time scale 1/|alpha_11|.
a11 = sys_.M[0, 0]
ts = re.integrate_reduced(sys_, s0, 5 / abs(a11), n_samples=6)
print("alpha_11 =", a11)
print("n2_tilde:", ts["n2_tilde"])
