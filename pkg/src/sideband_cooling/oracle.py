"""Brute-force master-equation reference on a truncated atom x Fock space.

Basis ordering is atom-major: index ``a * (N + 1) + n`` with atom state
``a`` in {0 (ground), 1 (excited)} and phonon number ``n`` in 0..N.  The
density matrix is propagated with RK4 under

    drho/dt = -i (H rho - rho H^dagger) + R(rho),

with the non-Hermitian conditional Hamiltonian H and the recoil reset
operator R evaluated by Gauss-Legendre quadrature over the emission angle.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ode
from .errors import CutoffTooSmall, NumericalError, TraceDrift, TruncationLeak
from .params import PhysParams
from .rate_eqs import IDX, N_STATE, STATE_NAMES, assemble_generator, initial_state, mean_phonon
from .timeseries import TimeSeries

TRACE_TOL = 1e-6
PSD_TOL = 1e-8


class PositivityLoss(NumericalError):
    pass


@dataclass(frozen=True)
class FockConfig:
    """Phonon cutoff N (dimension N + 1) and truncation tolerances.

    Operator identities are only checked on the levels ``0 .. N - guard``;
    truncating the displacement operator spoils the top ``guard`` levels.
    """

    cutoff: int = 30
    leak_tol: float = 1e-8
    guard: int = 6
    quad_order: int = 16

    @property
    def dim(self) -> int:
        return 2 * (self.cutoff + 1)


def annihilation(n_levels: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, n_levels)), 1)


def displacement(shift: float, cutoff: int) -> np.ndarray:
    """exp(-i shift (b + b^dagger)) on levels 0..cutoff, via eigendecomposition."""
    b = annihilation(cutoff + 1)
    w, v = np.linalg.eigh(b + b.T)
    return (v * np.exp(-1j * shift * w)) @ v.T


@dataclass
class OperatorSet:
    params: PhysParams
    config: FockConfig
    b: np.ndarray          # full-space phonon annihilation
    sm: np.ndarray         # full-space atomic lowering |0><1|
    D: np.ndarray          # phonon-space D(i eta)
    nodes: np.ndarray      # quadrature nodes zeta_j in [-1, 1]
    weights: np.ndarray    # 3 Gamma / 8 * w_j * angular factor(zeta_j)
    D_nodes: np.ndarray    # phonon-space D(i eta zeta_j), shape (q, N+1, N+1)
    x: np.ndarray
    y: np.ndarray
    H: np.ndarray          # conditional Hamiltonian (non-Hermitian)
    observables: dict = field(default_factory=dict)

    @property
    def n_levels(self) -> int:
        return self.config.cutoff + 1

    def subblock(self) -> np.ndarray:
        """Full-space indices of the trusted levels 0..N-guard for both atom states."""
        M, keep = self.n_levels, self.n_levels - self.config.guard
        return np.array([a * M + n for a in (0, 1) for n in range(keep)])


def _quadrature(p: PhysParams, order: int):
    z, w = np.polynomial.legendre.leggauss(order)
    d2 = p.d3 ** 2
    return z, 3.0 * p.gamma / 8.0 * w * (1.0 + d2 + (1.0 - 3.0 * d2) * z * z)


def build_operators(p: PhysParams, cfg: FockConfig = FockConfig()) -> OperatorSet:
    N = cfg.cutoff
    if N < 2 or N - cfg.guard < 1:
        raise CutoffTooSmall(f"cutoff {N} leaves no trusted levels below the guard band {cfg.guard}")
    M = N + 1
    eye2, eyeM = np.eye(2), np.eye(M)
    bp = annihilation(M)
    sm2 = np.array([[0.0, 1.0], [0.0, 0.0]])
    b = np.kron(eye2, bp)
    sm = np.kron(sm2, eyeM)
    D = displacement(p.eta, N)
    Dfull = np.kron(eye2, D)

    x = Dfull @ sm
    xdx = x.conj().T @ x
    y = b - 1j * p.eta * xdx

    # H = Omega/2 (D sigma- + h.c.) + Delta sigma+sigma- + nu b+b - i Gamma/2 sigma+sigma-
    H = np.zeros((2 * M, 2 * M), dtype=complex)
    H[:M, M:] = 0.5 * p.omega * D
    H[M:, :M] = 0.5 * p.omega * D.conj().T
    num = bp.T @ bp
    H[:M, :M] = p.nu * num
    H[M:, M:] = p.nu * num + (p.delta - 0.5j * p.gamma) * eyeM

    nodes, weights = _quadrature(p, cfg.quad_order)
    D_nodes = np.array([displacement(p.eta * z, N) for z in nodes])
    ops = OperatorSet(p, cfg, b, sm, D, nodes, weights, D_nodes, x, y, H)
    ops.observables = _observable_matrices(ops)

    keep = np.arange(M - cfg.guard)
    # D b D^dagger = b + i eta holds only away from the cutoff
    shifted = D @ bp @ D.conj().T - bp - 1j * p.eta * eyeM
    defect = float(np.max(np.abs(shifted[np.ix_(keep, keep)])))
    if defect > cfg.leak_tol:
        raise CutoffTooSmall(f"displacement defect {defect:.3g} on levels 0..{keep[-1]} "
                             f"exceeds leak_tol {cfg.leak_tol:g}; raise the cutoff or guard")
    return ops


def _observable_matrices(ops: OperatorSet) -> dict:
    x, y = ops.x, ops.y
    xd, yd = x.conj().T, y.conj().T
    xdx, ydy = xd @ x, yd @ y
    xp, xm = x + xd, x - xd
    yp, ym = y + yd, y - yd
    y2p, y2m = y @ y + yd @ yd, y @ y - yd @ yd
    return {
        "n1": xdx, "n2": ydy, "n4": xdx @ ydy,
        "k1": xp, "k2": 1j * xm,
        "k7": yp, "k8": 1j * ym, "k9": y2p, "k10": 1j * y2m,
        "k11": xdx @ yp, "k12": 1j * xdx @ ym,
        "k13": xp @ ydy, "k14": 1j * xm @ ydy,
        "k15": xm @ ym, "k16": 1j * xp @ ym, "k17": xp @ yp, "k18": 1j * xm @ yp,
        "k19": xm @ y2m, "k20": 1j * xp @ y2m, "k21": xp @ y2p, "k22": 1j * xm @ y2p,
        "k23": xdx @ y2p, "k24": 1j * xdx @ y2m,
        "m": ops.b.conj().T @ ops.b,
    }


def reset(rho, ops: OperatorSet) -> np.ndarray:
    """R(rho) = 3G/8 int dzeta sigma- D(i eta zeta) rho D^dagger sigma+ [angular factor]."""
    M = ops.n_levels
    ree = rho[M:, M:]
    kicked = ops.D_nodes @ ree @ ops.D_nodes.conj().transpose(0, 2, 1)
    out = np.zeros_like(rho, dtype=complex)
    out[:M, :M] = np.tensordot(ops.weights, kicked, axes=1)
    return out


def reset_xy(rho, ops: OperatorSet) -> np.ndarray:
    """Same operator written with x:  x D(i eta (1 - zeta))^dagger rho D(...) x^dagger."""
    eye2 = np.eye(2)
    out = np.zeros((2 * ops.n_levels,) * 2, dtype=complex)
    for z, w in zip(ops.nodes, ops.weights):
        K = ops.x @ np.kron(eye2, displacement(ops.params.eta * (1.0 - z), ops.config.cutoff)).conj().T
        out += w * (K @ rho @ K.conj().T)
    return out


def lindblad_rhs(rho, ops: OperatorSet) -> np.ndarray:
    H = ops.H
    return -1j * (H @ rho - rho @ H.conj().T) + reset(rho, ops)


def ground_state_density(cfg: FockConfig, kind: str = "fock", m0: float = 0.0,
                         beta: complex = 0.0) -> np.ndarray:
    """Ground-state atom times a Fock, coherent or thermal phonon state."""
    M = cfg.cutoff + 1
    n = np.arange(M)
    if kind == "fock":
        k = int(round(m0))
        if abs(k - m0) > 1e-12 or not 0 <= k <= cfg.cutoff:
            raise ValueError(f"Fock state needs an integer 0 <= m0 <= {cfg.cutoff}, got {m0}")
        phon = np.zeros((M, M), dtype=complex)
        phon[k, k] = 1.0
    elif kind == "coherent":
        beta = complex(beta)
        logfact = np.cumsum(np.log(np.maximum(n, 1)))
        amp = np.exp(-0.5 * abs(beta) ** 2 - 0.5 * logfact) * beta ** n
        amp /= np.linalg.norm(amp)
        phon = np.outer(amp, amp.conj())
    elif kind == "thermal":
        if m0 < 0:
            raise ValueError("m0 must be >= 0")
        pops = (m0 / (m0 + 1.0)) ** n if m0 > 0 else (n == 0).astype(float)
        phon = np.diag(pops / pops.sum()).astype(complex)
    else:
        raise ValueError(f"unknown initial state kind {kind!r}")
    rho = np.zeros((2 * M, 2 * M), dtype=complex)
    rho[:M, :M] = phon
    return rho


def expectations(rho, ops: OperatorSet, check: bool = True) -> tuple[np.ndarray, float]:
    """All 23 rate-equation variables and m = <b^dagger b> for density matrix ``rho``."""
    obs = ops.observables
    vals = np.array([np.real(np.sum(obs[name].T * rho)) for name in STATE_NAMES])
    m = float(np.real(np.sum(obs["m"].T * rho)))
    if check:
        defect = abs(m - float(mean_phonon(vals, ops.params.eta)))
        if defect > ops.config.leak_tol:
            raise TruncationLeak(f"phonon-number identity violated by {defect:.3g}")
    return vals, m


def default_dt(p: PhysParams) -> float:
    return 0.005 / max(p.gamma, p.nu, abs(p.delta), p.omega)


@dataclass
class OracleRun:
    times: np.ndarray
    states: np.ndarray       # (n_samples, 23)
    m: np.ndarray
    monitors: dict
    final_rho: np.ndarray
    params: PhysParams
    config: FockConfig
    dt: float

    def to_timeseries(self) -> TimeSeries:
        obs = {"m": self.m, **{f"monitor_{k}": v for k, v in self.monitors.items()}}
        meta = {"params": self.params.as_dict(),
                "integrator": {"method": "rk4", "dt": self.dt, "cutoff": self.config.cutoff,
                               "quad_order": self.config.quad_order},
                "model": "oracle"}
        return TimeSeries(self.times, self.states, STATE_NAMES, obs, meta)


def _top_population(rho, M):
    d = np.real(np.diag(rho))
    return float(d[M - 2:M].sum() + d[2 * M - 2:2 * M].sum())


def evolve(rho0, ops: OperatorSet, t_end, dt=None, n_samples=501) -> OracleRun:
    """RK4 propagation of the master equation with per-sample monitors.

    Raises TruncationLeak when the two highest Fock levels hold more than
    ``leak_tol`` population, TraceDrift when |tr rho - 1| > 1e-6 and
    PositivityLoss when an eigenvalue of rho drops below -1e-8.
    """
    dt = default_dt(ops.params) if dt is None else dt
    M = ops.n_levels
    tol = ops.config.leak_tol
    states, ms = [], []
    mon = {"trace_drift": [], "min_eig": [], "top_population": []}

    def sample(t, rho):
        tr = float(np.real(np.trace(rho)))
        herm = 0.5 * (rho + rho.conj().T)
        lo = float(np.linalg.eigvalsh(herm)[0])
        top = _top_population(rho, M)
        mon["trace_drift"].append(tr - 1.0)
        mon["min_eig"].append(lo)
        mon["top_population"].append(top)
        if top > tol:
            raise TruncationLeak(f"population {top:.3g} in the top Fock levels at t={t:g} "
                                 f"exceeds leak_tol {tol:g}; raise the cutoff")
        if abs(tr - 1.0) > TRACE_TOL:
            raise TraceDrift(f"trace drifted to {tr!r} at t={t:g}")
        if lo < -PSD_TOL:
            raise PositivityLoss(f"density matrix eigenvalue {lo:.3g} at t={t:g}; reduce dt")
        v, m = expectations(rho, ops)
        states.append(v)
        ms.append(m)

    times, rhos = ode.rk4_fixed(lambda r: lindblad_rhs(r, ops), np.asarray(rho0, dtype=complex),
                                t_end, dt, n_samples, guard=sample)
    return OracleRun(times, np.array(states), np.array(ms),
                     {k: np.array(v) for k, v in mon.items()}, rhos[-1], ops.params,
                     ops.config, float(dt))


def compare_with_rate_equations(p: PhysParams, cfg: FockConfig, t_end, *, kind="fock", m0=1.0,
                                beta=0.0, dt=None, n_samples=201,
                                observables=("n1", "k11", "k12", "m")) -> dict:
    """Run the oracle and the 23 equations from the same state; report deviations."""
    ops = build_operators(p, cfg)
    run = evolve(ground_state_density(cfg, kind, m0, beta), ops, t_end, dt, n_samples)
    g = assemble_generator(p)
    s0 = initial_state(kind, m0=m0, beta=beta)
    rate = ode.affine_exact(g.A, g.b, s0, run.times)
    rate_m = mean_phonon(rate, p.eta)
    bound = 10.0 * p.eta ** 2
    report = {"params": p.as_dict(), "cutoff": cfg.cutoff, "t_end": float(t_end),
              "dt": run.dt, "bound": bound, "observables": {}}
    for name in observables:
        if name == "m":
            a, b = run.m, rate_m
        else:
            a, b = run.states[:, IDX[name]], rate[:, IDX[name]]
        dev = np.abs(a - b)
        report["observables"][name] = {"max_abs": float(dev.max()),
                                       "rms": float(np.sqrt(np.mean(dev ** 2))),
                                       "within_bound": bool(dev.max() < bound)}
    report["passed"] = all(v["within_bound"] for v in report["observables"].values())
    report["run"] = run
    return report
