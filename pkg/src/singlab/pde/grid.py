"""Polar grids on the unit disk and the axisymmetric unit ball."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import RegularGridInterpolator


class GridMode(str, enum.Enum):
    DISK_2D = "DISK_2D"
    BALL_3D_AXISYMMETRIC = "BALL_3D_AXISYMMETRIC"


@dataclass(frozen=True)
class PolarGrid:
    """Uniform grid in (r, angle).

    DISK_2D: ``n_ang`` periodic nodes θ_j = 2πj/n_ang.
    BALL_3D_AXISYMMETRIC: ``n_ang`` nodes φ_j in [0, π] including both axis
    points; the solution is independent of the azimuth.

    Ring 0 is the centre; all its entries carry the single centre unknown.
    """

    mode: GridMode
    n_r: int
    n_ang: int
    R: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mode", GridMode(self.mode))
        if self.n_r < 16 or self.n_ang < 16:
            raise ValueError(f"grid needs n_r, n_ang >= 16, got {self.n_r} x {self.n_ang}")
        if self.R != 1.0:
            raise ValueError("only the unit radius is supported")

    @property
    def dim(self) -> int:
        return 2 if self.mode is GridMode.DISK_2D else 3

    @cached_property
    def r(self) -> np.ndarray:
        return np.linspace(0.0, self.R, self.n_r)

    @property
    def dr(self) -> float:
        return self.R / (self.n_r - 1)

    @cached_property
    def ang(self) -> np.ndarray:
        if self.mode is GridMode.DISK_2D:
            return 2.0 * math.pi * np.arange(self.n_ang) / self.n_ang
        return np.linspace(0.0, math.pi, self.n_ang)

    @property
    def dang(self) -> float:
        if self.mode is GridMode.DISK_2D:
            return 2.0 * math.pi / self.n_ang
        return math.pi / (self.n_ang - 1)

    @property
    def boundary_spacing(self) -> float:
        return self.dang * self.R

    @cached_property
    def ang_measure(self) -> np.ndarray:
        """Measure of each angular cell on the unit circle / unit sphere."""
        if self.mode is GridMode.DISK_2D:
            return np.full(self.n_ang, self.dang)
        lo = np.clip(self.ang - 0.5 * self.dang, 0.0, math.pi)
        hi = np.clip(self.ang + 0.5 * self.dang, 0.0, math.pi)
        return 2.0 * math.pi * (np.cos(lo) - np.cos(hi))

    @cached_property
    def ang_flux(self) -> np.ndarray:
        """Flux weights at the n_ang - 1 (3D) or n_ang (2D, periodic) cell faces."""
        if self.mode is GridMode.DISK_2D:
            return np.ones(self.n_ang)
        mid = self.ang[:-1] + 0.5 * self.dang
        return 2.0 * math.pi * np.sin(mid)

    @cached_property
    def boundary_weights(self) -> np.ndarray:
        return self.ang_measure * self.R ** (self.dim - 1)

    @cached_property
    def volume_weights(self) -> np.ndarray:
        """Trapezoidal weights in r (with r^{d-1}) times angular measure, shape (n_r, n_ang)."""
        wr = np.full(self.n_r, self.dr)
        wr[0] = wr[-1] = 0.5 * self.dr
        wr = wr * self.r ** (self.dim - 1)
        return np.outer(wr, self.ang_measure)

    @property
    def n_unknowns(self) -> int:
        return 1 + (self.n_r - 1) * self.n_ang

    def boundary_point(self, angle: float) -> np.ndarray:
        if self.mode is GridMode.DISK_2D:
            return self.R * np.array([math.cos(angle), math.sin(angle)])
        return self.R * np.array([math.sin(angle), 0.0, math.cos(angle)])

    def to_polar(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        r = np.linalg.norm(x, axis=1)
        if self.mode is GridMode.DISK_2D:
            ang = np.mod(np.arctan2(x[:, 1], x[:, 0]), 2.0 * math.pi)
        else:
            rho = np.linalg.norm(x[:, :-1], axis=1)
            ang = np.arctan2(rho, x[:, -1])
        return r, ang

    def interpolator(self, values: np.ndarray, method: str = "linear"):
        """Callable u(x) for Cartesian points x of shape (n, dim)."""
        values = np.asarray(values, dtype=float).reshape(self.n_r, self.n_ang)
        if self.mode is GridMode.DISK_2D:
            ang = np.append(self.ang, 2.0 * math.pi)
            vals = np.concatenate([values, values[:, :1]], axis=1)
        else:
            ang, vals = self.ang, values
        interp = RegularGridInterpolator((self.r, ang), vals, method=method)

        def u(x):
            r, a = self.to_polar(x)
            if np.any(r > self.R * (1 + 1e-12)):
                raise ValueError("interpolation point outside the domain")
            return interp(np.column_stack([np.minimum(r, self.R), a]))

        return u
