"""Linear cooling equations for expectation values of the x/y operators.

Three levels of description are provided:

* the full closed set of 23 equations (``assemble_generator``), built by
  adding the zeroth- and first-order contributions of every equation block;
* the 5-variable weak-confinement model for (n2, k7, k8, k9, k10) obtained
  after eliminating all variables decaying at the rate Gamma;
* the scalar strong-confinement equation dn2/dt = -gamma_c n2 + c.

The state ordering in :data:`STATE_NAMES` is part of the file formats.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from . import ode
from .analytic import gamma_c_strong_pair, mean_phonon_trajectory
from .errors import OutOfRange, SingularGenerator, StepUnstable
from .params import PhysParams, mu_squared, theta
from .timeseries import TimeSeries

STATE_NAMES = ("n1", "n2", "n4", "k1", "k2", "k7", "k8", "k9", "k10", "k11", "k12",
               "k13", "k14", "k15", "k16", "k17", "k18", "k19", "k20", "k21", "k22",
               "k23", "k24")
IDX = {name: i for i, name in enumerate(STATE_NAMES)}
N_STATE = len(STATE_NAMES)
REDUCED_NAMES = ("n2", "k7", "k8", "k9", "k10")

BLOWUP = 1e12
PIVOT_TOL = 1e-14


@dataclass(frozen=True)
class LinearGenerator:
    """ds/dt = A s + b over the ordering of STATE_NAMES."""

    A: np.ndarray
    b: np.ndarray
    params: PhysParams
    order_eta: int = 2

    def rhs(self, s):
        return self.A @ s + self.b


def assemble_generator(p: PhysParams, order: int = 2) -> LinearGenerator:
    """Build the 23x23 generator, keeping terms up to eta**order."""
    A = np.zeros((N_STATE, N_STATE))
    b = np.zeros(N_STATE)
    eta, nu, G, W, D = p.eta, p.nu, p.gamma, p.omega, p.delta
    th = theta(p.d3)

    def add(row, col, coeff, power=0):
        if power <= order:
            A[IDX[row], IDX[col]] += coeff * eta ** power

    # y-operator populations and coherences
    add("n2", "k11", nu, 1); add("n2", "k12", -G, 1); add("n2", "n1", th * G, 2)
    add("k7", "n1", 2 * nu, 1); add("k7", "k8", -nu)
    add("k8", "k7", nu); add("k8", "n1", -2 * G, 1)
    add("k9", "k10", -2 * nu); add("k9", "k11", 2 * nu, 1); add("k9", "k12", 2 * G, 1)
    add("k9", "n1", -2 * th * G, 2)
    add("k10", "k9", 2 * nu); add("k10", "k12", 2 * nu, 1); add("k10", "k11", -2 * G, 1)

    # x-operator block
    add("n1", "k2", W / 2); add("n1", "n1", -G)
    add("k1", "k15", -nu, 1); add("k1", "k2", -D); add("k1", "k1", -G / 2)
    b[IDX["k2"]] = W
    add("k2", "n1", -2 * W); add("k2", "k16", -nu, 1); add("k2", "k1", D); add("k2", "k2", -G / 2)

    # mixed coherences coupling x to the first powers of y
    add("k11", "k18", W / 2); add("k11", "k12", -nu); add("k11", "n1", 2 * nu, 1)
    add("k11", "k11", -G)
    add("k12", "k15", -W / 2); add("k12", "k11", nu); add("k12", "k12", -G)
    add("k15", "k8", -W); add("k15", "k12", 2 * W); add("k15", "k16", -D); add("k15", "k18", -nu)
    add("k15", "k1", nu, 1); add("k15", "k13", 2 * nu, 1); add("k15", "k21", -nu, 1)
    add("k15", "k15", -G / 2)
    add("k16", "k15", D); add("k16", "k17", nu)
    add("k16", "k2", nu, 1); add("k16", "k14", 2 * nu, 1); add("k16", "k22", -nu, 1)
    add("k16", "k16", -G / 2)
    add("k17", "k18", -D); add("k17", "k16", -nu); add("k17", "k1", nu, 1); add("k17", "k19", -nu, 1)
    add("k17", "k17", -G / 2)
    add("k18", "k7", W); add("k18", "k11", -2 * W); add("k18", "k17", D); add("k18", "k15", nu)
    add("k18", "k2", nu, 1); add("k18", "k20", -nu, 1); add("k18", "k18", -G / 2)

    # x with y^dagger y
    add("n4", "k14", W / 2); add("n4", "n4", -G)
    add("k13", "k14", -D); add("k13", "k13", -G / 2)
    add("k14", "n2", W); add("k14", "n4", -2 * W); add("k14", "k13", D); add("k14", "k14", -G / 2)

    # x with y^2
    add("k19", "k10", -W); add("k19", "k24", 2 * W); add("k19", "k20", -D); add("k19", "k22", -2 * nu)
    add("k19", "k19", -G / 2)
    add("k20", "k19", D); add("k20", "k21", 2 * nu); add("k20", "k20", -G / 2)
    add("k21", "k22", -D); add("k21", "k20", -2 * nu); add("k21", "k21", -G / 2)
    add("k22", "k9", W); add("k22", "k23", -2 * W); add("k22", "k21", D); add("k22", "k19", 2 * nu)
    add("k22", "k22", -G / 2)
    add("k23", "k22", W / 2); add("k23", "k24", -2 * nu); add("k23", "k23", -G)
    add("k24", "k19", -W / 2); add("k24", "k23", 2 * nu); add("k24", "k24", -G)
    return LinearGenerator(A, b, p, order)


def mean_phonon(s, eta):
    """m = n2 - eta k12 + eta^2 n1; ``s`` may be a stack of states."""
    s = np.asarray(s)
    return s[..., IDX["n2"]] - eta * s[..., IDX["k12"]] + eta ** 2 * s[..., IDX["n1"]]


def initial_state(kind: str = "fock", m0: float = 0.0, beta: complex = 0.0) -> np.ndarray:
    """Ground-state atom times a phonon state, as a 23-vector.

    ``kind`` is ``"fock"`` or ``"thermal"`` (mean phonon number ``m0``) or
    ``"coherent"`` (amplitude ``beta``).  All x and mixed expectation values
    vanish for a ground-state atom.
    """
    s = np.zeros(N_STATE)
    if kind in ("fock", "thermal"):
        if m0 < 0:
            raise OutOfRange(f"m0 must be >= 0, got {m0}")
        s[IDX["n2"]] = m0
    elif kind == "coherent":
        beta = complex(beta)
        s[IDX["n2"]] = abs(beta) ** 2
        s[IDX["k7"]] = 2 * beta.real
        s[IDX["k8"]] = -2 * beta.imag
        s[IDX["k9"]] = 2 * (beta * beta).real
        s[IDX["k10"]] = -2 * (beta * beta).imag
    else:
        raise OutOfRange(f"unknown initial state kind {kind!r}")
    return s


def default_dt(p: PhysParams) -> float:
    return 0.01 / max(p.gamma, p.nu, abs(p.delta), p.omega)


def _blowup_guard(t, y):
    if not np.all(np.abs(y) < BLOWUP):
        raise StepUnstable(f"state exceeded {BLOWUP:g} at t={t:g}; reduce dt")


def _run(A, b, s0, t_end, dt, method, rtol, n_samples):
    """Shared driver for ds/dt = A s + b; returns (times, states, info)."""
    if t_end <= 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    s0 = np.asarray(s0, dtype=float)
    if not np.all(np.isfinite(s0)):
        raise ValueError("initial state must be finite")
    rhs = lambda s: A @ s + b  # noqa: E731
    info = {"method": method, "t_end": float(t_end)}
    if method == "rk4":
        times, ys = ode.rk4_fixed(rhs, s0, t_end, dt, n_samples, step_guard=_blowup_guard)
        info["dt"] = float(dt)
    elif method == "adaptive":
        times, ys = ode.rk4_adaptive(rhs, s0, t_end, dt, rtol=rtol, n_samples=n_samples,
                                     guard=_blowup_guard)
        info.update(dt0=float(dt), rtol=float(rtol))
    elif method == "exact":
        times = np.linspace(0.0, t_end, max(int(n_samples), 2))
        ys = ode.affine_exact(A, b, s0, times)
        _blowup_guard(t_end, ys)
    else:
        raise ValueError(f"unknown method {method!r}")
    info["samples"] = len(times)
    return times, ys, info


def integrate(g: LinearGenerator, s0, t_end, dt=None, *, method="rk4", rtol=1e-8,
              max_samples=1001) -> TimeSeries:
    """Integrate the 23 equations from ``s0`` to ``t_end``.

    ``method`` is ``"rk4"`` (fixed step, default ``dt = 0.01 / max rate``),
    ``"adaptive"`` (step doubling, relative tolerance ``rtol``) or ``"exact"``
    (matrix-exponential propagator; the only practical choice when the
    cooling time 1/gamma_c is 1e6 - 1e8 times the fastest time scale).
    """
    dt = default_dt(g.params) if dt is None else dt
    times, ys, info = _run(g.A, g.b, s0, t_end, dt, method, rtol, max_samples)
    return TimeSeries(times, ys, STATE_NAMES, {"m": mean_phonon(ys, g.params.eta)},
                      {"params": g.params.as_dict(), "integrator": info, "model": "full23"})


def stationary_state(g: LinearGenerator) -> np.ndarray:
    """Solve A s = -b by LU with partial pivoting."""
    scale = max(1.0, float(np.max(np.abs(g.A))))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lu, piv = sla.lu_factor(g.A, check_finite=True)
    pivots = np.abs(np.diag(lu))
    if pivots.min() < PIVOT_TOL * scale:
        raise SingularGenerator(
            f"generator is singular (smallest pivot {pivots.min():.3g}); "
            "no stationary cooling state exists without drive (omega = 0)")
    s = sla.lu_solve((lu, piv), -g.b)
    r = g.A @ s + g.b
    if np.max(np.abs(r)) >= 1e-10 * max(np.max(np.abs(g.b)), 1e-300):
        s = s + sla.lu_solve((lu, piv), -r)
    return s


def stationary_phonon_number(p: PhysParams) -> float:
    return float(mean_phonon(stationary_state(assemble_generator(p)), p.eta))


# -- weak confinement: five equations ---------------------------------------------

@dataclass(frozen=True)
class ReducedWeakSystem:
    """d/dt (n2, k7, k8, k9, k10) = M s + beta, split by powers of eta."""

    M_parts: tuple[np.ndarray, np.ndarray, np.ndarray]
    beta_parts: tuple[np.ndarray, np.ndarray, np.ndarray]
    params: PhysParams
    order_eta: int = 2

    @property
    def M(self) -> np.ndarray:
        return sum(self.M_parts[: self.order_eta + 1])

    @property
    def beta(self) -> np.ndarray:
        return sum(self.beta_parts[: self.order_eta + 1])

    def truncated(self, order: int) -> "ReducedWeakSystem":
        if not 0 <= order <= 2:
            raise ValueError(f"order must be 0, 1 or 2, got {order}")
        return ReducedWeakSystem(self.M_parts, self.beta_parts, self.params, order)

    def shift(self) -> np.ndarray:
        """M^-1 beta, the offset between raw and tilde variables."""
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("error")
                return sla.solve(self.M, self.beta)
        except (np.linalg.LinAlgError, sla.LinAlgWarning) as exc:
            raise SingularGenerator(f"reduced matrix M is singular at order "
                                    f"{self.order_eta}: {exc}") from None

    def stationary(self) -> np.ndarray:
        return -self.shift()


def reduced_weak_system(p: PhysParams, order: int = 2) -> ReducedWeakSystem:
    eta, nu, G, W, D = p.eta, p.nu, p.gamma, p.omega, p.delta
    mu2 = mu_squared(p)
    mu4 = mu2 * mu2
    W2 = W * W

    M0 = np.zeros((5, 5))
    M0[1, 2], M0[2, 1] = -nu, nu
    M0[3, 4], M0[4, 3] = -2 * nu, 2 * nu

    M1 = np.zeros((5, 5))
    a42 = 4 * eta * nu * W2 / mu4 * (W2 + 2 * G * G)
    a43 = 2 * eta * G * W2 / mu2
    M1[0, 1] = -2 * eta * nu * W2 / mu4 * (G * G - 4 * D * D - W2)
    M1[0, 2] = -eta * G * W2 / mu2
    M1[3, 1], M1[3, 2] = a42, a43
    M1[4, 1], M1[4, 2] = -a43, a42

    M2 = np.zeros((5, 5))
    a = 16 * eta ** 2 * nu * D * G * W2 / mu4
    for i in (0, 2, 3, 4):
        M2[i, i] = -a
    M2[0, 3] = a / 2
    M2[3, 0] = 2 * a

    beta1 = np.array([0.0, 2 * eta * nu * W2 / mu2, -2 * eta * G * W2 / mu2, 0.0, 0.0])
    beta2 = np.array([eta ** 2 * G * W2 / mu2 * theta(p.d3), 0.0, 0.0, 0.0, 0.0])
    return ReducedWeakSystem((M0, M1, M2), (np.zeros(5), beta1, beta2), p, order)


def integrate_reduced(sys: ReducedWeakSystem, s0, t_end, dt=None, *, method="exact",
                      n_samples=1001) -> TimeSeries:
    """Integrate the five weak-confinement equations.

    Besides the raw variables the result carries the shifted (tilde)
    variables ``s + M^-1 beta`` as observables ``<name>_tilde`` whenever M is
    invertible; at order 0 (or eta = 0) M has a zero eigenvalue and the shift
    is skipped (``metadata["shift"] is None``).
    """
    dt = 0.01 / max(sys.params.nu, 1e-300) if dt is None else dt
    M, beta = sys.M, sys.beta
    times, ys, info = _run(M, beta, s0, t_end, dt, method, 1e-8, n_samples)
    obs = {"m": ys[:, 0].copy()}
    try:
        shift = sys.shift()
    except SingularGenerator:
        shift = None
    if shift is not None or not np.any(beta):
        # without drive the tilde variables coincide with the raw ones
        tilde = ys + (0.0 if shift is None else shift)
        for j, name in enumerate(REDUCED_NAMES):
            obs[name + "_tilde"] = tilde[:, j]
    meta = {"params": sys.params.as_dict(), "integrator": info, "model": "reduced5",
            "order_eta": sys.order_eta, "shift": None if shift is None else shift.tolist()}
    return TimeSeries(times, ys, REDUCED_NAMES, obs, meta)


# -- strong confinement: one equation ---------------------------------------------

def strong_rhs(p: PhysParams, n2):
    gamma_c, c = gamma_c_strong_pair(p)
    return -gamma_c * n2 + c


def integrate_strong(p: PhysParams, n0, t_end, dt=None, *, method="rk4",
                     n_samples=1001) -> TimeSeries:
    gamma_c, c = gamma_c_strong_pair(p)
    if dt is None:
        dt = 0.01 / abs(gamma_c) if gamma_c else t_end / 1000
    A, b = np.array([[-gamma_c]]), np.array([c])
    times, ys, info = _run(A, b, [n0], t_end, dt, method, 1e-10, n_samples)
    closed = mean_phonon_trajectory(n0, c / gamma_c, gamma_c, times)
    return TimeSeries(times, ys, ("n2",), {"m": ys[:, 0].copy(), "m_closed_form": closed},
                      {"params": p.as_dict(), "integrator": info, "model": "strong1",
                       "gamma_c": gamma_c, "c": c})
