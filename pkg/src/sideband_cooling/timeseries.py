"""Sampled trajectories and their CSV / JSON file formats.

CSV: one header row ``t,<state names...>,<observable names...>``, comma
separated, ``.`` decimal point, floats written with 17 significant digits.

JSON: ``{"params", "integrator", "names", "observables", "samples": [{"t",
"state", "m", ...}]}``; one document per file.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


def fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class TimeSeries:
    times: np.ndarray
    states: np.ndarray                  # shape (n_samples, n_components)
    names: tuple[str, ...]
    observables: dict[str, np.ndarray] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states)
        if self.states.ndim == 1:
            self.states = self.states[:, None]
        self.names = tuple(self.names)
        n = len(self.times)
        if self.states.shape != (n, len(self.names)):
            raise ValueError(f"states shape {self.states.shape} does not match "
                             f"{n} samples x {len(self.names)} names")
        if n > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("sample times must be strictly increasing")
        for key, v in self.observables.items():
            if len(v) != n:
                raise ValueError(f"observable {key!r} has {len(v)} samples, expected {n}")

    def __len__(self):
        return len(self.times)

    def __getitem__(self, name: str) -> np.ndarray:
        if name in self.observables:
            return np.asarray(self.observables[name])
        try:
            return self.states[:, self.names.index(name)]
        except ValueError:
            raise KeyError(name) from None

    @property
    def m(self) -> np.ndarray:
        return self["m"]

    def columns(self) -> list[str]:
        return ["t", *self.names, *self.observables]

    def to_csv(self, path) -> Path:
        path = Path(path)
        obs = [np.asarray(v, dtype=float) for v in self.observables.values()]
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(self.columns())
            for i, t in enumerate(self.times):
                row = [fmt(t), *(fmt(x) for x in np.real(self.states[i]))]
                row.extend(fmt(v[i]) for v in obs)
                w.writerow(row)
        return path

    def to_json(self, path, manifest: str | None = None) -> Path:
        path = Path(path)
        meta = dict(self.metadata)
        doc = {
            "params": meta.pop("params", None),
            "integrator": meta.pop("integrator", None),
            "names": list(self.names),
            "observables": list(self.observables),
            "metadata": meta,
            "samples": [],
        }
        if manifest is not None:
            doc["manifest"] = manifest
        for i, t in enumerate(self.times):
            sample = {"t": float(t), "state": [float(x) for x in np.real(self.states[i])]}
            for key, v in self.observables.items():
                sample[key] = float(v[i])
            doc["samples"].append(sample)
        path.write_text(json.dumps(doc, indent=1, default=_jsonable), encoding="utf-8")
        return path

    @classmethod
    def from_json(cls, path) -> "TimeSeries":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        samples = doc["samples"]
        meta = dict(doc.get("metadata") or {})
        meta["params"] = doc.get("params")
        meta["integrator"] = doc.get("integrator")
        return cls(
            times=[s["t"] for s in samples],
            states=[s["state"] for s in samples],
            names=doc["names"],
            observables={k: np.array([s[k] for s in samples]) for k in doc["observables"]},
            metadata=meta,
        )

    @classmethod
    def from_csv(cls, path, names) -> "TimeSeries":
        with Path(path).open(newline="") as fh:
            rows = list(csv.reader(fh))
        header, data = rows[0], np.array(rows[1:], dtype=float)
        names = tuple(names)
        k = len(names)
        if header[1:1 + k] != list(names):
            raise ValueError("CSV header does not match the given state names")
        obs = {h: data[:, 1 + k + j] for j, h in enumerate(header[1 + k:])}
        return cls(data[:, 0], data[:, 1:1 + k], names, obs)


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "as_dict"):
        return obj.as_dict()
    raise TypeError(f"cannot serialise {type(obj).__name__}")
