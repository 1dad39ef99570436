"""Flat ``key = value`` run configuration.

Blank lines and lines starting with ``#`` are ignored; everything after a
``#`` on a value line is a comment.  Keys::

    eta nu gamma omega delta d3 unit                 physical parameters
    model t_end dt method rtol samples               time evolution
    initial m0 beta_re beta_im order                 initial state / eta order
    cutoff leak_tol guard quad_order                 master-equation oracle
    quantity omega_min omega_max omega_points omega_spacing
    delta_min delta_max delta_points delta_spacing workers     scans
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .params import PhysParams


def _choice(*options):
    def conv(v):
        if v not in options:
            raise ValueError(f"expected one of {', '.join(options)}")
        return v
    conv.__name__ = "one of " + "|".join(options)
    return conv


KEYS = {
    "eta": float, "nu": float, "gamma": float, "omega": float, "delta": float, "d3": float,
    "unit": _choice("gamma", "nu"),
    "model": _choice("full23", "reduced5", "strong1", "oracle"),
    "t_end": float, "dt": float, "method": _choice("rk4", "adaptive", "exact"),
    "rtol": float, "samples": int,
    "initial": _choice("fock", "coherent", "thermal"),
    "m0": float, "beta_re": float, "beta_im": float, "order": int,
    "cutoff": int, "leak_tol": float, "guard": int, "quad_order": int,
    "quantity": _choice("m_ss", "gamma_c"),
    "omega_min": float, "omega_max": float, "omega_points": int,
    "omega_spacing": _choice("linear", "log"),
    "delta_min": float, "delta_max": float, "delta_points": int,
    "delta_spacing": _choice("linear", "log"),
    "workers": int,
}

DEFAULTS = {
    "gamma": 1.0, "omega": 0.0, "delta": 0.0, "d3": 0.0, "unit": "gamma",
    "model": "full23", "method": "rk4", "rtol": 1e-8, "samples": 501,
    "initial": "fock", "m0": 1.0, "beta_re": 0.0, "beta_im": 0.0, "order": 2,
    "cutoff": 30, "leak_tol": 1e-8, "guard": 6, "quad_order": 16,
    "quantity": "m_ss", "omega_points": 41, "omega_spacing": "log",
    "delta_points": 41, "delta_spacing": "log", "workers": 4,
}


def convert(key: str, raw: str, line: int | None = None):
    if key not in KEYS:
        raise ConfigError("unknown configuration key", key=key, line=line)
    try:
        return KEYS[key](raw.strip())
    except ValueError as exc:
        raise ConfigError(f"invalid value {raw.strip()!r}: {exc}", key=key, line=line) from None


def parse_config(text: str) -> dict:
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", line=lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key in out:
            raise ConfigError("duplicate key", key=key, line=lineno)
        out[key] = convert(key, value, lineno)
    return out


def load_config(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    return parse_config(text)


@dataclass
class RunConfig:
    values: dict

    def __getitem__(self, key):
        if key in self.values:
            return self.values[key]
        if key in DEFAULTS:
            return DEFAULTS[key]
        raise ConfigError("required key is missing", key=key)

    def get(self, key, default=None):
        try:
            return self[key]
        except ConfigError:
            return default

    def params(self) -> PhysParams:
        return PhysParams(eta=self["eta"], nu=self["nu"], gamma=self["gamma"],
                          omega=self["omega"], delta=self["delta"], d3=self["d3"],
                          unit=self["unit"])


def build_config(path=None, overrides: dict | None = None) -> RunConfig:
    values = load_config(path) if path else {}
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return RunConfig(values)
