"""Eigenvalue analysis of the weak-confinement matrix M order by order in eta."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import ConvergenceFailure
from .rate_eqs import ReducedWeakSystem
from .timeseries import TimeSeries

MARGINAL_TOL = 1e-12  # times nu


@dataclass
class SpectrumReport:
    order_eta: int
    eigenvalues: np.ndarray
    classification: str  # "Marginal", "Damped" or "Unstable"
    closed_form: np.ndarray
    closed_form_residuals: np.ndarray
    max_real: float
    nu: float

    def as_dict(self) -> dict:
        return {
            "order_eta": self.order_eta,
            "classification": self.classification,
            "max_real": self.max_real,
            "nu": self.nu,
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "closed_form": [[z.real, z.imag] for z in self.closed_form],
            "closed_form_residuals": [float(r) for r in self.closed_form_residuals],
        }

    def to_json(self, path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.as_dict(), indent=1), encoding="utf-8")
        return path


def closed_form_eigenvalues(sys: ReducedWeakSystem, order: int) -> np.ndarray:
    """Analytic spectrum of M: {0, +-i nu, +-2i nu} below second order."""
    nu = sys.params.nu
    if order < 2:
        return np.array([0, -1j * nu, 1j * nu, -2j * nu, 2j * nu])
    M2 = sys.M_parts[2]
    a11, a14, a41 = M2[0, 0], M2[0, 3], M2[3, 0]
    w23 = 0.5 * np.sqrt(complex(4 * nu * nu - a11 * a11))
    w45 = np.sqrt(complex(4 * nu * nu - a14 * a41))
    return np.array([a11, 0.5 * a11 - 1j * w23, 0.5 * a11 + 1j * w23,
                     a11 - 1j * w45, a11 + 1j * w45])


def classify(eigenvalues, nu, tol=MARGINAL_TOL) -> str:
    max_re = float(np.max(np.real(eigenvalues)))
    if max_re > tol * nu:
        return "Unstable"
    if max_re >= -tol * nu:
        return "Marginal"
    return "Damped"


def spectrum(sys: ReducedWeakSystem, order_eta: int | None = None) -> SpectrumReport:
    """Eigenvalues of M truncated at ``order_eta`` (default: the system's order)."""
    order = sys.order_eta if order_eta is None else order_eta
    if order != sys.order_eta:
        sys = sys.truncated(order)
    M = sys.M
    try:
        w, v = np.linalg.eig(M)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigenvalue iteration did not converge: {exc}") from None
    norm = max(np.linalg.norm(M, 2), np.finfo(float).tiny)
    resid = np.linalg.norm(M @ v - v * w, axis=0)
    if np.any(resid > 1e-10 * norm):
        raise ConvergenceFailure(f"eigenpair residual {resid.max():.3g} exceeds 1e-10 |M|")

    ref = closed_form_eigenvalues(sys, order)
    cost = np.abs(w[:, None] - ref[None, :])
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty(len(ref), dtype=int)
    perm[cols] = rows
    w = w[perm]
    nu = sys.params.nu
    return SpectrumReport(order, w, classify(w, nu), ref, np.abs(w - ref),
                          float(np.max(w.real)), nu)


@dataclass
class RotationReport:
    passed: bool
    n2_drift: float
    r1_drift: float          # relative drift of k7^2 + k8^2
    r2_drift: float          # relative drift of k9^2 + k10^2
    rate1: float | None      # fitted angular velocity of (k7, k8)
    rate2: float | None      # fitted angular velocity of (k9, k10)
    nu: float
    notes: list[str] = field(default_factory=list)

    def as_dict(self):
        return asdict(self)


def _drift(x):
    x = np.asarray(x, dtype=float)
    ref = abs(x[0])
    return float(np.max(np.abs(x - x[0])) / ref) if ref > 1e-300 else float(np.max(np.abs(x)))


def _angular_rate(times, a, b):
    if np.min(np.hypot(a, b)) < 1e-300:
        return None
    phase = np.unwrap(np.arctan2(b, a))
    return float(np.polyfit(times, phase, 1)[0])


def rotation_check(traj: TimeSeries, rtol=1e-8, rate_tol=1e-3) -> RotationReport:
    """Check the zeroth-order motion: n2 frozen, coherences rotating at nu and 2 nu."""
    nu = float(traj.metadata["params"]["nu"])
    get = lambda n: traj[n + "_tilde"] if n + "_tilde" in traj.observables else traj[n]  # noqa: E731
    n2, k7, k8, k9, k10 = (get(n) for n in ("n2", "k7", "k8", "k9", "k10"))
    t = traj.times
    rep = RotationReport(True, _drift(n2), _drift(k7 ** 2 + k8 ** 2), _drift(k9 ** 2 + k10 ** 2),
                         _angular_rate(t, k7, k8), _angular_rate(t, k9, k10), nu)
    for name in ("n2_drift", "r1_drift", "r2_drift"):
        if getattr(rep, name) > rtol:
            rep.passed = False
            rep.notes.append(f"{name}={getattr(rep, name):.3g} exceeds {rtol:g}")
    for rate, expected, label in ((rep.rate1, nu, "rate1"), (rep.rate2, 2 * nu, "rate2")):
        if rate is not None and abs(rate - expected) > rate_tol * expected:
            rep.passed = False
            rep.notes.append(f"{label}={rate:.6g}, expected {expected:.6g}")
    return rep
