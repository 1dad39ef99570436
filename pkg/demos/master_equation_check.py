"""
Checking the rate equations against the master equation
=======================================================

Propagates the full density matrix of atom x truncated oscillator and
compares n1, k11, k12 and m with the rate equations from the same start.
"""
from sideband_cooling import oracle, presets

# %%
# Weak confinement, 31 Fock levels.  A short run keeps the demo quick; the
# acceptance suite runs to t = 50 / Gamma.
rep = oracle.compare_with_rate_equations(presets.FIG6, oracle.FockConfig(cutoff=30), 10.0)
for name, r in rep["observables"].items():
    print(f"{name:4} max {r['max_abs']:.2e}  rms {r['rms']:.2e}  bound {rep['bound']:.2g}")

# %%
# The run carries its own health monitors: trace drift, smallest eigenvalue of
# rho and the population of the two highest Fock levels.
run = rep["run"]
print({k: float(abs(v).max()) for k, v in run.monitors.items()})

# %%
# The operator identities behind the rate equations hold on the levels well
# below the cutoff.
ops = oracle.build_operators(presets.FIG6, oracle.FockConfig(cutoff=30))
x, y = ops.x, ops.y
idx = ops.subblock()
comm = (x @ y - y @ x)[idx][:, idx]
print("max |[x, y]| on trusted levels:", abs(comm).max())
