import json

import numpy as np
import pytest

from sideband_cooling import presets
from sideband_cooling.cli import ScanGrid, evaluate_scan, main, read_matrix, steady_report
from sideband_cooling.config import build_config, parse_config
from sideband_cooling.errors import ConfigError, SingularGenerator
from sideband_cooling.timeseries import TimeSeries

FIG6_KEYS = ["--eta", "0.1", "--nu", "0.01", "--omega", "0.01", "--delta", "0.5"]


def write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


# -- configuration -------------------------------------------------------------

def test_parse_config_types_and_comments():
    cfg = parse_config("# comment\neta = 0.1\n\nnu=0.01  # trap\nmodel = reduced5\nsamples = 11\n")
    assert cfg == {"eta": 0.1, "nu": 0.01, "model": "reduced5", "samples": 11}


@pytest.mark.parametrize("text, key, line", [
    ("eta = 0.1\nfoo = 3\n", "foo", 2),
    ("eta = abc\n", "eta", 1),
    ("model = full24\n", "model", 1),
    ("eta = 0.1\neta = 0.2\n", "eta", 2),
])
def test_parse_errors_name_key_and_line(text, key, line):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert err.value.key == key and err.value.line == line
    assert f"line {line}" in str(err.value) and repr(key) in str(err.value)


def test_missing_required_key():
    with pytest.raises(ConfigError, match="'eta'"):
        build_config(None, {"nu": 1.0}).params()


def test_overrides_beat_file(tmp_path):
    cfg = build_config(write(tmp_path, "eta = 0.1\nnu = 0.5\n"), {"nu": 0.25})
    assert cfg.params().nu == 0.25 and cfg["gamma"] == 1.0


# -- exit codes ----------------------------------------------------------------

def test_invalid_key_exits_2(tmp_path, capsys):
    assert main(["evolve", "-c", write(tmp_path, "eta = 0.1\nfoo = 3\n"), "--out",
                 str(tmp_path)]) == 2
    assert "'foo'" in capsys.readouterr().err


def test_invalid_flag_value_exits_2(tmp_path):
    assert main(["steady", *FIG6_KEYS, "--d3", "two", "--out", str(tmp_path)]) == 2


def test_validation_failure_exits_2(tmp_path):
    assert main(["stability", "--eta", "0.1", "--nu", "0", "--out", str(tmp_path)]) == 2


def test_steady_without_drive_exits_3(tmp_path, capsys):
    assert main(["steady", "--eta", "0.1", "--nu", "1", "--delta", "1", "--out",
                 str(tmp_path)]) == 3
    assert "no stationary cooling state exists without drive" in capsys.readouterr().err


# -- steady --------------------------------------------------------------------

def test_steady_three_way_table_at_equal_rates(tmp_path):
    assert main(["steady", "--eta", "0.001", "--nu", "1", "--omega", "0.1", "--delta", "1",
                 "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "steady.json").read_text())
    assert rep["regime"] == "Intermediate" and rep["manifest"] == "manifest.json"
    assert set(rep["m_ss"]) == {"analytic", "rate_equations", "regime_limit"}
    assert rep["relative_differences"]["analytic|rate_equations"] < 1e-3


def test_steady_heating_flag():
    from sideband_cooling.params import PhysParams
    rep = steady_report(PhysParams(eta=0.01, nu=1.0, gamma=1.0, omega=0.1, delta=-1.0))
    assert rep["heating"] and rep["m_ss"]["analytic"] < 0


def test_steady_report_singular():
    from sideband_cooling.params import PhysParams
    with pytest.raises(SingularGenerator):
        steady_report(PhysParams(eta=0.01, nu=1.0, gamma=1.0, omega=0.0, delta=1.0))


# -- evolve ----------------------------------------------------------------------

def test_evolve_full23_writes_overlay_and_manifest(tmp_path):
    args = ["evolve", *FIG6_KEYS, "--t_end", "50", "--samples", "26", "--out", str(tmp_path)]
    assert main(args) == 0
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["command"] == "evolve" and man["seeds"] is None
    assert set(man["outputs"]) == {"trajectory.csv", "trajectory.json", "overlay.csv",
                                   "overlay.json"}
    for name in man["outputs"]:
        assert (tmp_path / name).exists()
        if name.endswith(".json"):
            assert json.loads((tmp_path / name).read_text())["manifest"] == "manifest.json"
    ov = TimeSeries.from_csv(tmp_path / "overlay.csv", ("m_numeric", "m_analytic"))
    assert ov.states.shape == (26, 2)
    assert ov.states[0, 0] == ov.states[0, 1] == 1.0


def test_evolve_is_deterministic(tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / str(k)
        assert main(["evolve", *FIG6_KEYS, "--t-end", "20", "--samples", "11",
                     "--out", str(out)]) == 0
        outs.append(out)
    for name in ("trajectory.csv", "overlay.csv"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()


def test_evolve_reduced_order0_circles(tmp_path):
    args = ["evolve", "--eta", "0.1", "--nu", "0.1", "--omega", "0.01", "--delta", "0.5",
            "--model", "reduced5", "--order", "0", "--initial", "coherent", "--beta_re", "1",
            "--t_end", "200", "--out", str(tmp_path)]
    assert main(args) == 0
    ts = TimeSeries.from_json(tmp_path / "trajectory.json")
    r = np.hypot(ts["k7_tilde"], ts["k8_tilde"])
    assert np.allclose(r, 2.0, rtol=1e-10)


def test_evolve_strong1_and_oracle(tmp_path):
    strong = ["--eta", "0.01", "--nu", "1", "--gamma", "0.01", "--omega", "0.01", "--delta", "1.5",
              "--unit", "nu"]
    assert main(["evolve", *strong, "--model", "strong1", "--t_end", "1e6", "--out",
                 str(tmp_path / "s")]) == 0
    assert main(["evolve", *FIG6_KEYS, "--model", "oracle", "--cutoff", "12", "--t_end", "2",
                 "--samples", "5", "--out", str(tmp_path / "o")]) == 0
    header = (tmp_path / "o" / "trajectory.csv").read_text().splitlines()[0]
    assert "monitor_trace_drift" in header


# -- scan ------------------------------------------------------------------------

def test_scan_serial_equals_concurrent():
    p = presets.FIG2["b"]
    grid = ScanGrid((1e-3, 1.0, 9, "log"), (-1.0, 3.0, 11, "linear"), p, "m_ss")
    a = evaluate_scan(grid, workers=1)
    b = evaluate_scan(grid, workers=8)
    assert np.array_equal(a, b, equal_nan=True)


def test_scan_grid_validation():
    p = presets.FIG2["b"]
    with pytest.raises(ConfigError):
        ScanGrid((1e-3, 1.0, 1, "log"), (0.1, 3.0, 5, "log"), p)
    with pytest.raises(ConfigError):
        ScanGrid((1e-3, 1.0, 5, "log"), (-0.1, 3.0, 5, "log"), p)


def test_scan_writes_nan_and_mask(tmp_path):
    cfg = write(tmp_path, "\n".join([
        "eta = 0.1", "nu = 1", "unit = nu", "gamma = 1",
        "omega_min = 0.001", "omega_max = 1", "omega_points = 6",
        "delta_min = -2", "delta_max = 3", "delta_points = 11", "delta_spacing = linear",
    ]))
    assert main(["scan", "-c", cfg, "--out", str(tmp_path)]) == 0
    deltas, omegas, logm = read_matrix(tmp_path / "scan_log10_m_ss.csv")
    _, _, mask = read_matrix(tmp_path / "scan_mask.csv")
    assert logm.shape == (11, 6) and np.allclose(omegas[[0, -1]], [1e-3, 1.0])
    assert np.array_equal(np.isnan(logm), mask.astype(bool))
    assert np.all(mask[deltas < 0] == 1) and np.all(mask[deltas > 0.5] == 0)


@pytest.mark.parametrize("fig, target", [("fig2a", 0.5), ("fig2c", 1.0)])
def test_figure_scan_minimum(tmp_path, fig, target):
    assert main(["figure", fig, "--out", str(tmp_path)]) == 0
    deltas, omegas, logm = read_matrix(tmp_path / fig / f"{fig}_log10_m_ss.csv")
    i, _ = np.unravel_index(np.nanargmin(logm), logm.shape)
    # nearest grid line to the expected optimum, on a 41-point log grid
    assert abs(np.log(deltas[i] / target)) < 2 * np.log(deltas[1] / deltas[0])


def test_figure_cooling_rate_grows_with_drive(tmp_path):
    assert main(["figure", "fig3a", "--out", str(tmp_path)]) == 0
    deltas, omegas, logg = read_matrix(tmp_path / "fig3a" / "fig3a_log10_gamma_c.csv")
    row = logg[np.argmin(np.abs(deltas - 0.5))]
    assert np.all(np.diff(row) > 0)


# -- stability / oracle-compare / figures ----------------------------------------------------

def test_stability_command(tmp_path):
    assert main(["stability", "--eta", "0.1", "--nu", "0.1", "--omega", "0.01", "--delta", "0.5",
                 "--out", str(tmp_path)]) == 0
    cls = [json.loads((tmp_path / f"stability_order{k}.json").read_text())["classification"]
           for k in range(3)]
    assert cls == ["Marginal", "Marginal", "Damped"]


def test_oracle_compare_without_recoil(tmp_path):
    args = ["oracle-compare", "--eta", "0", "--nu", "0.1", "--omega", "0.2", "--delta", "0.5",
            "--cutoff", "8", "--t_end", "5", "--samples", "11", "--out", str(tmp_path)]
    assert main(args) == 0
    rep = json.loads((tmp_path / "oracle_compare.json").read_text())
    assert all(r["max_abs"] < 1e-8 for r in rep["observables"].values())


def test_figure_fig5c_overlay(tmp_path):
    assert main(["figure", "fig5c", "--out", str(tmp_path)]) == 0
    ov = TimeSeries.from_csv(tmp_path / "fig5c" / "fig5c_overlay.csv", ("m_numeric", "m_analytic"))
    late = ov.times > 10.0
    dev = np.abs(np.log10(ov.states[late, 0]) - np.log10(ov.states[late, 1]))
    assert dev.max() < 0.05


def test_unknown_figure_exits_2(tmp_path):
    assert main(["figure", "fig4", "--out", str(tmp_path)]) == 2
