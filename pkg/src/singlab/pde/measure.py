"""Boundary measures (atoms plus a density) and their mollification."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grid import GridMode, PolarGrid


@dataclass(frozen=True)
class Atom:
    theta: float  # angular location on the boundary
    weight: float


@dataclass(frozen=True, eq=False)
class BoundaryMeasure:
    """μ = Σ_j k_j δ_{θ_j} + density.

    ``density`` is either ``None``, a constant, an array of samples on the
    boundary nodes of the grid it is used with, or a table ``(angles, values)``
    interpolated onto the nodes.
    """

    atoms: tuple = ()
    density: object = None
    epsilon: float = 0.0
    label: str = field(default="")

    def __post_init__(self):
        atoms = tuple(a if isinstance(a, Atom) else Atom(*a) for a in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if atoms and not self.epsilon > 0:
            raise ValueError("atoms need a positive mollification width epsilon")

    def scaled(self, factor: float) -> "BoundaryMeasure":
        dens = self.density
        if dens is not None:
            if isinstance(dens, tuple):
                dens = (dens[0], factor * np.asarray(dens[1], dtype=float))
            else:
                dens = factor * np.asarray(dens, dtype=float)
        atoms = tuple(Atom(a.theta, factor * a.weight) for a in self.atoms)
        return BoundaryMeasure(atoms, dens, self.epsilon, self.label)

    def with_epsilon(self, epsilon: float) -> "BoundaryMeasure":
        return BoundaryMeasure(self.atoms, self.density, epsilon, self.label)

    @property
    def is_zero(self) -> bool:
        if any(a.weight != 0 for a in self.atoms):
            return False
        if self.density is None:
            return True
        vals = self.density[1] if isinstance(self.density, tuple) else self.density
        return not np.any(np.asarray(vals, dtype=float))

    def describe(self) -> dict:
        dens = self.density
        if dens is None:
            dspec = None
        elif np.ndim(dens) == 0:
            dspec = float(dens)
        else:
            dspec = self.label or "samples"
        return {"atoms": [{"theta": a.theta, "weight": a.weight} for a in self.atoms],
                "density": dspec, "epsilon": self.epsilon}


def load_density_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                if rows:
                    raise
    arr = np.array(rows, dtype=float)
    return arr[:, 0], arr[:, 1]


def _density_on_nodes(density, grid: PolarGrid) -> np.ndarray:
    if density is None:
        return np.zeros(grid.n_ang)
    if isinstance(density, tuple):
        ang, val = (np.asarray(v, dtype=float) for v in density)
        order = np.argsort(ang)
        period = 2.0 * math.pi if grid.mode is GridMode.DISK_2D else None
        return np.interp(grid.ang, ang[order], val[order], period=period)
    arr = np.asarray(density, dtype=float)
    if arr.ndim == 0:
        return np.full(grid.n_ang, float(arr))
    if arr.shape != (grid.n_ang,):
        raise ValueError(f"density has {arr.shape} samples, grid has {grid.n_ang} boundary nodes")
    return arr.copy()


def bump(distance: np.ndarray, epsilon: float) -> np.ndarray:
    """cos² bump supported on |distance| < epsilon."""
    d = np.abs(distance)
    return np.where(d < epsilon, np.cos(0.5 * math.pi * d / epsilon) ** 2, 0.0)


def atom_distance(theta: float, grid: PolarGrid) -> np.ndarray:
    """Arc-length distance from the atom to every boundary node."""
    if grid.mode is GridMode.DISK_2D:
        diff = np.mod(grid.ang - theta + math.pi, 2.0 * math.pi) - math.pi
        return grid.R * np.abs(diff)
    if math.isclose(theta, 0.0, abs_tol=1e-12):
        return grid.R * grid.ang
    if math.isclose(theta, math.pi, abs_tol=1e-12):
        return grid.R * (math.pi - grid.ang)
    raise ValueError("axisymmetric grids only carry atoms at the poles (theta = 0 or pi)")


def mollify_measure(measure: BoundaryMeasure, grid: PolarGrid) -> np.ndarray:
    """Boundary density samples: the density plus one normalised bump per atom."""
    out = _density_on_nodes(measure.density, grid)
    if measure.atoms and measure.epsilon < 2.0 * grid.boundary_spacing * (1 - 1e-12):
        raise ValueError(
            f"mollification width {measure.epsilon:.3g} is below two boundary spacings "
            f"({2 * grid.boundary_spacing:.3g}); atom is under-resolved")
    w = grid.boundary_weights
    for atom in measure.atoms:
        shape = bump(atom_distance(atom.theta, grid), measure.epsilon)
        out += atom.weight * shape / float(np.dot(shape, w))
    return out
