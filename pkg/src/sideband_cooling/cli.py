"""Command-line front end.

    sideband-cooling evolve --config run.cfg --out out/
    sideband-cooling steady --eta 0.1 --nu 1 --gamma 1 --omega 0.1 --delta 1 --unit nu
    sideband-cooling scan --config grid.cfg --quantity gamma_c --out scan/
    sideband-cooling figure fig5 --out figs/

Exit status: 0 on success, 2 on configuration / parameter errors, 3 on
numerical failures.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import analytic, oracle, presets, rate_eqs, stability
from ._version import __version__
from .config import KEYS, RunConfig, build_config, convert
from .errors import ConfigError, NumericalError, ParameterError
from .params import PhysParams, classify_regime, validate
from .timeseries import TimeSeries, _jsonable, fmt

MANIFEST = "manifest.json"


# -- manifests ----------------------------------------------------------------

@dataclass
class RunManifest:
    command: str
    params: dict | None
    outputs: list[str] = field(default_factory=list)
    seeds: None = None  # nothing in the pipeline is random
    code_version: str = __version__
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    extra: dict = field(default_factory=dict)

    def write(self, out: Path) -> Path:
        doc = {"command": self.command, "params": self.params, "seeds": self.seeds,
               "code_version": self.code_version, "timestamp": self.timestamp,
               "outputs": sorted(self.outputs), **self.extra}
        path = out / MANIFEST
        path.write_text(json.dumps(doc, indent=1), encoding="utf-8")
        return path


def _write_series(ts: TimeSeries, out: Path, stem: str, man: RunManifest):
    ts.to_csv(out / f"{stem}.csv")
    ts.to_json(out / f"{stem}.json", manifest=MANIFEST)
    man.outputs += [f"{stem}.csv", f"{stem}.json"]


def _write_json(doc: dict, out: Path, name: str, man: RunManifest):
    doc = {**doc, "manifest": MANIFEST}
    (out / name).write_text(json.dumps(doc, indent=1, default=_jsonable), encoding="utf-8")
    man.outputs.append(name)


# -- helpers --------------------------------------------------------------------

def _beta(cfg: RunConfig) -> complex:
    return complex(cfg["beta_re"], cfg["beta_im"])


def _fock_config(cfg: RunConfig) -> oracle.FockConfig:
    return oracle.FockConfig(cutoff=cfg["cutoff"], leak_tol=cfg["leak_tol"], guard=cfg["guard"],
                             quad_order=cfg["quad_order"])


def _rel(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def regime_limit_m_ss(p: PhysParams) -> tuple[str, float]:
    tag = classify_regime(p).tag
    if tag == "Weak":
        return "weak", analytic.m_ss_weak(p)
    if tag == "Strong":
        return "strong", analytic.m_ss_strong(p)
    return "small_omega", analytic.m_ss_small_omega(p)


def _overlay(ts: TimeSeries, p: PhysParams) -> TimeSeries:
    """Numeric m(t) next to the closed-form exponential approach."""
    m_ss, g_c = analytic.m_ss_full(p), analytic.gamma_c_full(p)
    m_an = analytic.mean_phonon_trajectory(ts.m[0], m_ss, g_c, ts.times)
    return TimeSeries(ts.times, np.column_stack([ts.m, m_an]), ("m_numeric", "m_analytic"), {},
                      {"params": p.as_dict(), "model": "overlay", "m_ss": m_ss,
                       "gamma_c": g_c})


# -- evolve ---------------------------------------------------------------------

def run_evolve(cfg: RunConfig, p: PhysParams) -> dict[str, TimeSeries]:
    model, t_end = cfg["model"], cfg["t_end"]
    dt, n = cfg.get("dt"), cfg["samples"]
    kind, m0 = cfg["initial"], cfg["m0"]
    if model == "full23":
        g = rate_eqs.assemble_generator(p, cfg["order"])
        s0 = rate_eqs.initial_state(kind, m0, _beta(cfg))
        ts = rate_eqs.integrate(g, s0, t_end, dt, method=cfg["method"], rtol=cfg["rtol"],
                                max_samples=n)
        return {"trajectory": ts, "overlay": _overlay(ts, p)}
    if model == "reduced5":
        sys_ = rate_eqs.reduced_weak_system(p, cfg["order"])
        s0 = rate_eqs.initial_state(kind, m0, _beta(cfg))[[rate_eqs.IDX[k] for k in
                                                           rate_eqs.REDUCED_NAMES]]
        method = cfg.values.get("method", "exact")
        return {"trajectory": rate_eqs.integrate_reduced(sys_, s0, t_end, dt, method=method,
                                                         n_samples=n)}
    if model == "strong1":
        return {"trajectory": rate_eqs.integrate_strong(p, m0, t_end, dt, method=cfg["method"],
                                                        n_samples=n)}
    fc = _fock_config(cfg)
    ops = oracle.build_operators(p, fc)
    rho0 = oracle.ground_state_density(fc, kind, m0, _beta(cfg))
    return {"trajectory": oracle.evolve(rho0, ops, t_end, dt, n).to_timeseries()}


def cmd_evolve(cfg: RunConfig, out: Path) -> int:
    p = validate(cfg.params())
    man = RunManifest("evolve", p.as_dict(), extra={"model": cfg["model"]})
    for stem, ts in run_evolve(cfg, p).items():
        _write_series(ts, out, stem, man)
    man.write(out)
    print(f"evolve ({cfg['model']}): wrote {', '.join(sorted(man.outputs))} to {out}")
    return 0


# -- steady ---------------------------------------------------------------------

def steady_report(p: PhysParams) -> dict:
    if p.omega == 0:
        # A is singular without drive; let the LU solve say so
        rate_eqs.stationary_state(rate_eqs.assemble_generator(p))
    values = {"analytic": analytic.m_ss_full(p),
              "rate_equations": rate_eqs.stationary_phonon_number(p)}
    label, values["regime_limit"] = regime_limit_m_ss(p)
    keys = list(values)
    diffs = {f"{a}|{b}": _rel(values[a], values[b])
             for i, a in enumerate(keys) for b in keys[i + 1:]}
    return {"params": p.as_dict(), "regime": classify_regime(p).tag, "regime_formula": label,
            "m_ss": values, "relative_differences": diffs,
            "heating": any(v < 0 for v in values.values())}


def cmd_steady(cfg: RunConfig, out: Path) -> int:
    p = validate(cfg.params())
    rep = steady_report(p)
    print(f"regime: {rep['regime']} (limit formula: {rep['regime_formula']})")
    for name, v in rep["m_ss"].items():
        flag = "  heating" if v < 0 else ""
        print(f"  m_ss {name:<15} {v: .10e}{flag}")
    for pair, d in rep["relative_differences"].items():
        print(f"  rel diff {pair:<30} {d:.3e}")
    man = RunManifest("steady", p.as_dict())
    _write_json(rep, out, "steady.json", man)
    man.write(out)
    return 0


# -- scan -----------------------------------------------------------------------

@dataclass(frozen=True)
class ScanGrid:
    omega_range: tuple  # (min, max, points, spacing)
    delta_range: tuple
    fixed: PhysParams
    quantity: str = "m_ss"

    def __post_init__(self):
        for name, (lo, hi, n, spacing) in (("omega", self.omega_range),
                                           ("delta", self.delta_range)):
            if n < 2:
                raise ConfigError("need at least 2 points", key=f"{name}_points")
            if spacing not in ("linear", "log"):
                raise ConfigError(f"unknown spacing {spacing!r}", key=f"{name}_spacing")
            if spacing == "log" and not (lo > 0 and hi > 0):
                raise ConfigError("log spacing needs a positive range", key=f"{name}_min")
            if not hi > lo:
                raise ConfigError("max must exceed min", key=f"{name}_max")
        if self.quantity not in ("m_ss", "gamma_c"):
            raise ConfigError(f"unknown quantity {self.quantity!r}", key="quantity")

    @staticmethod
    def _axis(lo, hi, n, spacing):
        return np.geomspace(lo, hi, n) if spacing == "log" else np.linspace(lo, hi, n)

    @property
    def omegas(self) -> np.ndarray:
        return self._axis(*self.omega_range)

    @property
    def deltas(self) -> np.ndarray:
        return self._axis(*self.delta_range)


def _scan_point(grid: ScanGrid, omega: float, delta: float) -> float:
    p = grid.fixed.replace(omega=float(omega), delta=float(delta))
    f = analytic.m_ss_full if grid.quantity == "m_ss" else analytic.gamma_c_full
    try:
        return float(f(p))
    except NumericalError:
        return float("nan")


def evaluate_scan(grid: ScanGrid, workers: int = 1) -> np.ndarray:
    """Raw quantity on the (delta, omega) grid; rows follow delta."""
    pts = [(w, d) for d in grid.deltas for w in grid.omegas]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vals = list(pool.map(lambda wd: _scan_point(grid, *wd), pts))
    else:
        vals = [_scan_point(grid, *wd) for wd in pts]
    return np.array(vals).reshape(len(grid.deltas), len(grid.omegas))


def log_with_mask(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mask = ~(values > 0)  # negative, zero or undefined
    logv = np.full(values.shape, np.nan)
    logv[~mask] = np.log10(values[~mask])
    return logv, mask


def _write_matrix(path: Path, rows, cols, mat, cell=fmt):
    lines = [",".join(["delta\\omega", *(fmt(c) for c in cols)])]
    for r, row in zip(rows, mat):
        lines.append(",".join([fmt(r), *(cell(v) for v in row)]))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_matrix(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Inverse of the scan writer: (deltas, omegas, matrix)."""
    text = Path(path).read_text(encoding="utf-8").splitlines()
    cols = np.array([float(x) for x in text[0].split(",")[1:]])
    body = np.array([[float(x) for x in line.split(",")] for line in text[1:]])
    return body[:, 0], cols, body[:, 1:]


def scan_grid_from_config(cfg: RunConfig, p: PhysParams) -> ScanGrid:
    def rng(axis):
        return (cfg[f"{axis}_min"], cfg[f"{axis}_max"], cfg[f"{axis}_points"],
                cfg[f"{axis}_spacing"])
    return ScanGrid(rng("omega"), rng("delta"), p, cfg["quantity"])


def run_scan(grid: ScanGrid, out: Path, man: RunManifest, workers: int, stem="scan"):
    vals = evaluate_scan(grid, workers)
    logv, mask = log_with_mask(vals)
    _write_matrix(out / f"{stem}_log10_{grid.quantity}.csv", grid.deltas, grid.omegas, logv)
    _write_matrix(out / f"{stem}_mask.csv", grid.deltas, grid.omegas, mask,
                  cell=lambda v: "1" if v else "0")
    man.outputs += [f"{stem}_log10_{grid.quantity}.csv", f"{stem}_mask.csv"]
    return vals


def cmd_scan(cfg: RunConfig, out: Path) -> int:
    base = cfg.params().replace(omega=cfg.get("omega_min", 1.0), delta=cfg.get("delta_min", 1.0))
    validate(base)
    grid = scan_grid_from_config(cfg, base)
    man = RunManifest("scan", base.as_dict(), extra={"quantity": grid.quantity,
                                                     "omega_range": list(grid.omega_range),
                                                     "delta_range": list(grid.delta_range)})
    vals = run_scan(grid, out, man, cfg["workers"])
    man.write(out)
    print(f"scan: {vals.size} points, {int(np.sum(~(vals > 0)))} masked, written to {out}")
    return 0


# -- oracle-compare -------------------------------------------------------------

def cmd_oracle_compare(cfg: RunConfig, out: Path) -> int:
    p = validate(cfg.params())
    rep = oracle.compare_with_rate_equations(
        p, _fock_config(cfg), cfg["t_end"], kind=cfg["initial"], m0=cfg["m0"], beta=_beta(cfg),
        dt=cfg.get("dt"), n_samples=cfg["samples"])
    run = rep.pop("run")
    man = RunManifest("oracle-compare", p.as_dict())
    _write_series(run.to_timeseries(), out, "oracle", man)
    _write_json(rep, out, "oracle_compare.json", man)
    man.write(out)
    _print_compare(rep)
    return 0


def _print_compare(rep: dict):
    print(f"oracle vs 23 equations (N={rep['cutoff']}, bound 10 eta^2 = {rep['bound']:.3g})")
    for name, r in rep["observables"].items():
        ok = "ok" if r["within_bound"] else "EXCEEDS"
        print(f"  {name:<4} max {r['max_abs']:.3e}  rms {r['rms']:.3e}  {ok}")


# -- stability ------------------------------------------------------------------

def run_stability(p: PhysParams, out: Path, man: RunManifest, stem="stability"):
    sys_ = rate_eqs.reduced_weak_system(p, 2)
    reports = []
    for order in (0, 1, 2):
        rep = stability.spectrum(sys_, order)
        _write_json(rep.as_dict(), out, f"{stem}_order{order}.json", man)
        reports.append(rep)
        eig = ", ".join(f"{z.real:+.3e}{z.imag:+.3e}j" for z in rep.eigenvalues)
        print(f"  order {order}: {rep.classification:<8} max Re {rep.max_real:+.3e}  [{eig}]")
    return reports


def cmd_stability(cfg: RunConfig, out: Path) -> int:
    p = validate(cfg.params())
    man = RunManifest("stability", p.as_dict())
    run_stability(p, out, man)
    man.write(out)
    return 0


# -- figure presets ---------------------------------------------------------------

FIGURES = ("fig1", "fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig3c",
           "fig5a", "fig5b", "fig5c", "fig6", "fig7")


def _figure(name: str, out: Path, workers: int, points: int) -> RunManifest:
    fig, sub = name[:4], name[4:]
    if fig == "fig1":
        p = presets.FIG1
        man = RunManifest("figure fig1", p.as_dict())
        sys_ = rate_eqs.reduced_weak_system(p, 2)
        s0 = rate_eqs.initial_state("coherent", beta=presets.FIG1_BETA)
        s0 = s0[[rate_eqs.IDX[k] for k in rate_eqs.REDUCED_NAMES]]
        t_end = 20 * 2 * np.pi / p.nu
        for order in (0, 1, 2):
            ts = rate_eqs.integrate_reduced(sys_.truncated(order), s0, t_end, n_samples=2001)
            _write_series(ts, out, f"fig1_order{order}", man)
        run_stability(p, out, man, "fig1_stability")
        return man
    if fig in ("fig2", "fig3"):
        p = (presets.FIG2 if fig == "fig2" else presets.FIG3)[sub]
        (wlo, whi), (dlo, dhi) = presets.scan_ranges(p)
        quantity = "m_ss" if fig == "fig2" else "gamma_c"
        grid = ScanGrid((wlo, whi, points, "log"), (dlo, dhi, points, "log"), p, quantity)
        man = RunManifest(f"figure {name}", p.as_dict(), extra={"approximate_ranges": True})
        run_scan(grid, out, man, workers, stem=name)
        return man
    if fig == "fig5":
        p = presets.FIG5[sub]
        g = rate_eqs.assemble_generator(p)
        t_end = 10.0 / p.gamma + 3.0 / analytic.gamma_c_full(p)
        s0 = rate_eqs.initial_state("fock", presets.FIG5_M0[sub])
        ts = rate_eqs.integrate(g, s0, t_end, method="exact", max_samples=1001)
        man = RunManifest(f"figure {name}", p.as_dict())
        _write_series(ts, out, f"{name}_trajectory", man)
        _write_series(_overlay(ts, p), out, f"{name}_overlay", man)
        return man
    if fig in ("fig6", "fig7"):
        weak = fig == "fig6"
        p = presets.FIG6 if weak else presets.FIG7
        fc = oracle.FockConfig(cutoff=presets.FIG6_CUTOFF if weak else presets.FIG7_CUTOFF)
        t_end, dt = (50.0, None) if weak else (10.0 / p.gamma, 0.01)
        rep = oracle.compare_with_rate_equations(p, fc, t_end, dt=dt)
        run = rep.pop("run")
        man = RunManifest(f"figure {name}", p.as_dict())
        _write_series(run.to_timeseries(), out, f"{name}_oracle", man)
        _write_json(rep, out, f"{name}_compare.json", man)
        _print_compare(rep)
        return man
    raise ConfigError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")


def cmd_figure(names, out: Path, workers: int, points: int) -> int:
    expanded = []
    for n in names:
        expanded += [f for f in FIGURES if f.startswith(n)] if n in ("fig2", "fig3", "fig5") \
            else [n]
    for n in expanded:
        sub = out / n
        sub.mkdir(parents=True, exist_ok=True)
        man = _figure(n, sub, workers, points)
        man.write(sub)
        print(f"{n}: wrote {len(man.outputs)} files to {sub}")
    return 0


# -- argument parsing -------------------------------------------------------------

def _add_keys(sp: argparse.ArgumentParser):
    sp.add_argument("--config", "-c", help="flat key = value configuration file")
    sp.add_argument("--out", "-o", default=".", help="output directory (default: .)")
    g = sp.add_argument_group("configuration keys (override the file)")
    for key in KEYS:
        flags = [f"--{key}"] + ([f"--{key.replace('_', '-')}"] if "_" in key else [])
        g.add_argument(*flags, dest=key, metavar=key.upper(), default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sideband-cooling",
                                 description="Laser sideband cooling of a trapped particle.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name, text in (("evolve", "integrate one model and write the trajectory"),
                       ("steady", "stationary phonon number three ways"),
                       ("scan", "log10 of m_ss or gamma_c over an (omega, delta) grid"),
                       ("oracle-compare", "master equation versus the 23 rate equations"),
                       ("stability", "spectra of the weak-confinement matrix at eta order 0-2")):
        _add_keys(sub.add_parser(name, help=text))
    fp = sub.add_parser("figure", help="figure presets: " + " ".join(FIGURES))
    fp.add_argument("names", nargs="+", metavar="FIGURE")
    fp.add_argument("--out", "-o", default=".")
    fp.add_argument("--workers", type=int, default=4)
    fp.add_argument("--points", type=int, default=41, help="grid points per scan axis")
    return ap


COMMANDS = {"evolve": cmd_evolve, "steady": cmd_steady, "scan": cmd_scan,
            "oracle-compare": cmd_oracle_compare, "stability": cmd_stability}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "figure":
            return cmd_figure(args.names, out, args.workers, args.points)
        overrides = {k: convert(k, getattr(args, k)) for k in KEYS
                     if getattr(args, k) is not None}
        cfg = build_config(args.config, overrides)
        return COMMANDS[args.command](cfg, out)
    except (ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
