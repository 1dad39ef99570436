"""Parameter sets behind the published figures.

Values the figure captions leave open (eta in Fig. 1, the parameter sets of
Fig. 5, the axis ranges of Figs. 2-3, initial phonon numbers) are chosen
here and marked ``approximate``.
"""
from __future__ import annotations

from .params import PhysParams

# Fig. 1: stability ladder of the five weak-confinement equations
FIG1 = PhysParams(eta=0.1, nu=0.1, gamma=1.0, omega=0.01, delta=0.5, d3=0.0)
FIG1_BETA = 1.0

# Fig. 2 / Fig. 3: contour plots over (Omega, Delta)
FIG2 = {
    "a": PhysParams(eta=0.01, nu=0.01, gamma=1.0, delta=0.5, unit="gamma"),
    "b": PhysParams(eta=0.1, nu=1.0, gamma=1.0, delta=1.0, unit="nu"),
    "c": PhysParams(eta=0.1, nu=1.0, gamma=0.01, delta=1.0, unit="nu"),
}
FIG3 = {
    "a": PhysParams(eta=0.01, nu=0.01, gamma=1.0, delta=0.5, unit="gamma"),
    "b": PhysParams(eta=0.1, nu=1.0, gamma=1.0, delta=1.0, unit="nu"),
    "c": PhysParams(eta=0.1, nu=1.0, gamma=0.01, delta=1.0, unit="nu"),
}


def scan_ranges(p: PhysParams):
    """Approximate axis ranges: Omega in [1e-3, 1], Delta in [1e-2, 3] x max(Gamma, nu)."""
    s = max(p.gamma, p.nu)
    return (1e-3 * s, 1.0 * s), (1e-2 * s, 3.0 * s)


# Fig. 5: (a) strong, (b) medium, (c) weak confinement (approximate)
FIG5 = {
    "a": PhysParams(eta=0.01, nu=1.0, gamma=0.01, omega=0.01, delta=1.0, unit="nu"),
    "b": PhysParams(eta=0.1, nu=1.0, gamma=1.0, omega=0.1, delta=1.0, unit="nu"),
    "c": PhysParams(eta=0.1, nu=0.01, gamma=1.0, omega=0.01, delta=0.5, unit="gamma"),
}
FIG5_M0 = {"a": 1.0, "b": 1.0, "c": 100.0}

# Figs. 6 and 7: rate equations versus the master equation
FIG6 = PhysParams(eta=0.1, nu=0.01, gamma=1.0, omega=0.01, delta=0.5, unit="gamma")
FIG7 = PhysParams(eta=0.01, nu=1.0, gamma=0.01, omega=0.01, delta=1.0, unit="nu")
FIG6_CUTOFF = 30
FIG7_CUTOFF = 12
