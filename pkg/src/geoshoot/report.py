"""Run reports and polyline files written by the command-line tool."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .geodesic import GeodesicSeries

SIG_DIGITS = 12


def sig(v):
    """Round to the report precision; None/inf/nan become None."""
    if v is None:
        return None
    v = float(v)
    if not math.isfinite(v):
        return None
    return float(f"{v:.{SIG_DIGITS}g}")


def sig_pair(p):
    return None if p is None else [sig(p[0]), sig(p[1])]


def solution_summary(sol, polyline=None) -> dict:
    return {
        "a": sig_pair(sol.a),
        "endpoint_series": sig_pair(sol.endpoint_series),
        "residual_series": sig(sol.residual_series),
        "endpoint_rk": sig_pair(sol.endpoint_rk),
        "residual_rk": sig(sol.residual_rk),
        "euclidean_norm": sig(sol.euclidean_norm),
        "g_norm": sig(sol.g_norm),
        "iterations": int(sol.iterations),
        "seed_index": int(sol.seed_index),
        "shortest": bool(sol.shortest),
        "verify_error": sol.verify_error,
        "polyline": polyline,
    }


@dataclass
class RunReport:
    surface: str
    p: list
    q: list
    config: dict
    solutions: list = field(default_factory=list)
    wall_time: float | None = None
    version: str = ""
    surface_definition: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))


def polyline(series: GeodesicSeries, samples: int) -> np.ndarray:
    """Rows (t, x, y) on a uniform grid of ``samples`` points in [0, 1]."""
    if samples < 2:
        raise ValueError("need at least two samples")
    ts = np.linspace(0.0, 1.0, samples)
    ts[-1] = 1.0
    rows = np.empty((samples, 3))
    for i, t in enumerate(ts):
        rows[i] = (t, *series(t))
    return rows


def write_polyline(path, rows) -> None:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "x", "y"])
        for t, x, y in rows:
            w.writerow([f"{t:.{SIG_DIGITS}g}", f"{x:.{SIG_DIGITS}g}", f"{y:.{SIG_DIGITS}g}"])


def read_polyline(path) -> np.ndarray:
    with Path(path).open(newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        if header != ["t", "x", "y"]:
            raise ValueError(f"unexpected polyline header {header}")
        return np.array([[float(v) for v in row] for row in r])
