import numpy as np
import pytest

from sideband_cooling import oracle as orc, presets
from sideband_cooling import rate_eqs as re
from sideband_cooling.errors import CutoffTooSmall, TruncationLeak
from sideband_cooling.params import PhysParams

P = PhysParams(eta=0.1, nu=0.1, gamma=1.0, omega=0.2, delta=0.5, d3=0.3)
CFG = orc.FockConfig(cutoff=30)


@pytest.fixture(scope="module")
def ops():
    return orc.build_operators(P, CFG)


def random_rho(rng, dim, support=None):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    if support is not None:
        mask = np.zeros(dim, bool)
        mask[support] = True
        a[~mask] = 0
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def sub(op, idx):
    return op[np.ix_(idx, idx)]


# -- construction --------------------------------------------------------------

def test_no_coupling_without_recoil():
    o = orc.build_operators(P.replace(eta=0.0), orc.FockConfig(cutoff=10))
    M = o.n_levels
    assert np.allclose(o.D, np.eye(M), atol=1e-14)
    assert np.allclose(o.H[:M, M:], 0.5 * P.omega * np.eye(M), atol=1e-14)


def test_vacuum_overlap_of_displacement():
    d30 = orc.displacement(0.1, 30)[0, 0]
    d60 = orc.displacement(0.1, 60)[0, 0]
    assert abs(d30 - d60) < 1e-9
    assert abs(d30 - np.exp(-0.005)) < 1e-9


def test_displacement_is_unitary():
    D = orc.displacement(0.37, 20)
    assert np.allclose(D @ D.conj().T, np.eye(21), atol=1e-13)


def test_ladder_commutator_on_subblock(ops):
    b = ops.b
    comm = b @ b.conj().T - b.conj().T @ b
    idx = ops.subblock()
    assert np.allclose(sub(comm, idx), np.eye(len(idx)), atol=1e-12)


def test_cutoff_too_small():
    with pytest.raises(CutoffTooSmall):
        orc.build_operators(P, orc.FockConfig(cutoff=4))
    with pytest.raises(CutoffTooSmall):
        orc.build_operators(P, orc.FockConfig(cutoff=1, guard=0))


# -- reset operator --------------------------------------------------------------

def test_reset_examples():
    p = P.replace(eta=0.0)
    o = orc.build_operators(p, orc.FockConfig(cutoff=8))
    M = o.n_levels
    rho = np.zeros((2 * M, 2 * M), complex)
    rho[M, M] = 1.0  # excited atom, vacuum
    out = orc.reset(rho, o)
    expected = np.zeros_like(rho)
    expected[0, 0] = p.gamma
    assert np.allclose(out, expected, atol=1e-14)
    ground = orc.ground_state_density(o.config, "coherent", beta=0.7)
    assert not np.any(orc.reset(ground, o))


@pytest.mark.parametrize("d3", [0.0, 0.5, 1.0])
def test_reset_trace_equals_decay_of_excited_population(d3):
    rng = np.random.default_rng(3)
    p = P.replace(d3=d3)
    o16 = orc.build_operators(p, CFG)
    o64 = orc.build_operators(p, orc.FockConfig(cutoff=30, quad_order=64))
    rho = random_rho(rng, CFG.dim)
    pe = np.trace(rho[o16.n_levels:, o16.n_levels:]).real
    assert abs(np.trace(orc.reset(rho, o16)).real - p.gamma * pe) < 1e-12
    assert abs(np.trace(orc.reset(rho, o64)).real - p.gamma * pe) < 1e-12


def test_reset_quadrature_converged():
    rng = np.random.default_rng(4)
    p = P.replace(eta=0.2, d3=0.6)
    # the larger recoil spoils more levels below the cutoff
    o16 = orc.build_operators(p, orc.FockConfig(cutoff=30, guard=8))
    o64 = orc.build_operators(p, orc.FockConfig(cutoff=30, guard=8, quad_order=64))
    rho = random_rho(rng, CFG.dim)
    assert np.max(np.abs(orc.reset(rho, o16) - orc.reset(rho, o64))) < 1e-12


def test_reset_x_form_equivalent(ops):
    # the x form shifts the phonon argument; compare on states away from the cutoff
    rng = np.random.default_rng(5)
    M = ops.n_levels
    keep = [a * M + n for a in (0, 1) for n in range(12)]
    rho = random_rho(rng, CFG.dim, keep)
    diff = orc.reset(rho, ops) - orc.reset_xy(rho, ops)
    assert np.max(np.abs(sub(diff, keep))) < 1e-10


# -- master equation -------------------------------------------------------------

def test_dark_state_without_drive():
    o = orc.build_operators(P.replace(omega=0.0), orc.FockConfig(cutoff=10))
    rho = orc.ground_state_density(o.config, "fock", 0)
    assert np.max(np.abs(orc.lindblad_rhs(rho, o))) < 1e-15


def test_rhs_trace_free_and_hermitian(ops):
    rng = np.random.default_rng(6)
    for _ in range(100):
        rho = random_rho(rng, CFG.dim)
        d = orc.lindblad_rhs(rho, ops)
        assert abs(np.trace(d)) < 1e-12
        assert np.allclose(d, d.conj().T, atol=1e-12)


def test_excited_state_decays_exponentially():
    p = P.replace(eta=0.0, omega=0.0)
    o = orc.build_operators(p, orc.FockConfig(cutoff=8))
    M = o.n_levels
    rho = np.zeros((2 * M, 2 * M), complex)
    rho[M, M] = 1.0
    run = orc.evolve(rho, o, 5.0, n_samples=51)
    assert np.allclose(run.states[:, re.IDX["n1"]], np.exp(-p.gamma * run.times), atol=1e-6)


def test_monitors_recorded(ops):
    run = orc.evolve(orc.ground_state_density(CFG, "fock", 1), ops, 1.0, n_samples=11)
    ts = run.to_timeseries()
    for k in ("trace_drift", "min_eig", "top_population"):
        assert f"monitor_{k}" in ts.observables
    assert np.max(np.abs(run.monitors["trace_drift"])) < 1e-10


def test_truncation_leak_raised(ops):
    rho = orc.ground_state_density(CFG, "fock", CFG.cutoff - 1)
    with pytest.raises(TruncationLeak, match="raise the cutoff"):
        orc.evolve(rho, ops, 1.0)


# -- expectation values ----------------------------------------------------------

def test_expectations_ground_vacuum(ops):
    vals, m = orc.expectations(orc.ground_state_density(CFG, "fock", 0), ops)
    assert np.allclose(vals, 0, atol=1e-14) and abs(m) < 1e-14


def test_expectations_one_phonon(ops):
    vals, m = orc.expectations(orc.ground_state_density(CFG, "fock", 1), ops)
    assert m == pytest.approx(1.0, abs=1e-14)
    assert vals[re.IDX["n2"]] == pytest.approx(1.0, abs=1e-14)  # x^dagger x vanishes on ground


def test_expectations_coherent_match_initial_state():
    o = orc.build_operators(P.replace(eta=0.0), CFG)
    vals, m = orc.expectations(orc.ground_state_density(CFG, "coherent", beta=1.0), o)
    assert np.allclose(vals, re.initial_state("coherent", beta=1.0), atol=1e-9)


# -- operator identities -----------------------------------------------------------

def test_identity_suite(ops):
    idx = ops.subblock()
    x, y, b = ops.x, ops.y, ops.b
    xd, yd = x.conj().T, y.conj().T
    one = np.eye(2 * ops.n_levels)
    obs = ops.observables
    tol = CFG.leak_tol
    m_identity = obs["m"] - (obs["n2"] - P.eta * obs["k12"] + P.eta ** 2 * obs["n1"])
    checks = {
        "m identity": m_identity,
        "[x,x+]": x @ xd - xd @ x - (one - 2 * xd @ x),
        "[y,y+]": y @ yd - yd @ y - one,
        "[x,y]": x @ y - y @ x,
        "[x,b]": x @ b - b @ x - 1j * P.eta * x,
        "[x+x,b+b]": (xd @ x) @ (b.conj().T @ b) - (b.conj().T @ b) @ (xd @ x),
    }
    for name, op in checks.items():
        assert np.max(np.abs(sub(op, idx))) < tol, name


# -- comparisons and convergence -------------------------------------------------------

def test_no_recoil_oracle_matches_rate_equations():
    p = presets.FIG6.replace(eta=0.0, omega=0.2)
    rep = orc.compare_with_rate_equations(p, orc.FockConfig(cutoff=8), 5.0, n_samples=21)
    for r in rep["observables"].values():
        assert r["max_abs"] < 1e-8


def test_cutoff_convergence_strong():
    p = presets.FIG7
    t_end = 50.0
    ms = []
    for n in (12, 24):
        cfg = orc.FockConfig(cutoff=n)
        run = orc.evolve(orc.ground_state_density(cfg, "fock", 1), orc.build_operators(p, cfg),
                         t_end, dt=0.01, n_samples=2)
        ms.append(run.m[-1])
    assert abs(ms[0] - ms[1]) < 1e-6


def test_cutoff_convergence_weak():
    p = presets.FIG6
    ms = []
    for n, guard in ((30, 6), (60, 7)):
        cfg = orc.FockConfig(cutoff=n, guard=guard)
        run = orc.evolve(orc.ground_state_density(cfg, "fock", 1), orc.build_operators(p, cfg),
                         3.0, n_samples=2)
        ms.append(run.m[-1])
    assert abs(ms[0] - ms[1]) < 1e-6
