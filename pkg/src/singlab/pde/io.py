"""Reading and writing GridSolution artifacts.

Two layouts share one header:

* ``json``: a single JSON object with the header fields plus ``values``.
* ``binary``: one line of JSON header, then the values as little-endian
  float64 in row-major (ring, angle) order.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np
import scipy

from .. import __version__
from ..growth import parse_nonlinearity
from ..regimes import ProblemParams
from .grid import PolarGrid
from .measure import BoundaryMeasure
from .solver import GridSolution

FORMAT_TAG = "singlab-grid-solution"


def versions() -> dict:
    return {"singlab": __version__, "numpy": np.__version__, "scipy": scipy.__version__}


def config_hash(config: dict | None) -> str:
    blob = json.dumps(config if config is not None else {}, sort_keys=True,
                      separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


def _header(sol: GridSolution, config: dict | None) -> dict:
    grid = sol.grid
    return {
        "format": FORMAT_TAG,
        "versions": versions(),
        "config_hash": config_hash(config),
        "grid": {"mode": grid.mode.value, "n_r": grid.n_r, "n_ang": grid.n_ang, "R": grid.R},
        "g": sol.g.spec,
        "measure": sol.measure.describe() if sol.measure is not None else None,
        "params": None if sol.params is None else {"N": sol.params.N, "p": sol.params.p},
        "iterations": sol.iterations,
        "final_residual": sol.final_residual,
    }


def write_solution(sol: GridSolution, path: str | Path, fmt: str = "json",
                   config: dict | None = None) -> Path:
    path = Path(path)
    head = _header(sol, config)
    if fmt == "json":
        head["values"] = sol.values.tolist()
        path.write_text(json.dumps(head, sort_keys=True) + "\n")
    elif fmt == "binary":
        with open(path, "wb") as fh:
            fh.write((json.dumps(head, sort_keys=True) + "\n").encode())
            fh.write(np.ascontiguousarray(sol.values, dtype="<f8").tobytes())
    else:
        raise ValueError(f"unknown format {fmt!r}; use 'json' or 'binary'")
    return path


def _measure_from(desc: dict | None) -> BoundaryMeasure | None:
    if desc is None:
        return None
    dens = desc.get("density")
    if isinstance(dens, str):  # sampled densities are not stored in the header
        dens = None
    atoms = [(a["theta"], a["weight"]) for a in desc.get("atoms", [])]
    return BoundaryMeasure(atoms, dens, float(desc.get("epsilon", 0.0)))


def read_solution(path: str | Path) -> GridSolution:
    raw = Path(path).read_bytes()
    first, _, rest = raw.partition(b"\n")
    head = json.loads(first)
    if head.get("format") != FORMAT_TAG:
        raise ValueError(f"{path} is not a grid solution file")
    grid = PolarGrid(head["grid"]["mode"], head["grid"]["n_r"], head["grid"]["n_ang"],
                     head["grid"]["R"])
    if "values" in head:
        values = np.asarray(head["values"], dtype=float)
    else:
        values = np.frombuffer(rest, dtype="<f8").astype(float)
    values = values.reshape(grid.n_r, grid.n_ang)
    prm = head.get("params")
    params = ProblemParams(prm["N"], prm["p"]) if prm else None
    return GridSolution(grid, values, parse_nonlinearity(head["g"]), _measure_from(head["measure"]),
                        params, head.get("iterations", 0), head.get("final_residual", 0.0))


__all__ = ["config_hash", "read_solution", "versions", "write_solution"]
