"""Sequences, order checks and near-field fits built on the grid solver."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..growth import (Nonlinearity, Power, Truncated, dirac_admissible,
                      exponential_orders, subcritical_check)
from .grid import GridMode, PolarGrid
from .measure import BoundaryMeasure, mollify_measure
from .solver import GridSolution, SolverOptions, solve_linear, solve_nonlinear
from .weak import l1_norm

ORDER_SLACK = 1e-10


class MonotonicityError(RuntimeError):
    pass


def _check_solvable(g: Nonlinearity, measure: BoundaryMeasure, grid: PolarGrid) -> None:
    if grid.dim >= 3:
        ok, _ = subcritical_check(g, grid.dim)
        if not ok:
            raise ValueError(f"{g.spec} is not subcritical in dimension {grid.dim}; "
                             "pass override=True to run anyway")
        return
    a_plus, a_minus = exponential_orders(g)
    if a_plus == 0 and a_minus == 0:
        return
    weights = [a.weight for a in measure.atoms]
    if measure.density is not None or not all(dirac_admissible(g, weights)):
        raise ValueError(f"data outside the admissible Dirac window for {g.spec}; "
                         "pass override=True to run anyway")


@dataclass
class SequenceResult:
    epsilons: list
    solutions: list
    l1_differences: list  # between consecutive solutions


def theorem_d_sequence(g: Nonlinearity, measure: BoundaryMeasure, grid: PolarGrid,
                       eps_list: Sequence[float], opts: SolverOptions | None = None,
                       override: bool = False) -> SequenceResult:
    """Solve with decreasing mollification widths and report L¹ Cauchy differences."""
    eps_list = [float(e) for e in eps_list]
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be strictly decreasing")
    if not override:
        _check_solvable(g, measure, grid)
    sols = [solve_nonlinear(g, measure.with_epsilon(e), grid, opts) for e in eps_list]
    diffs = [l1_norm(grid, b.values - a.values) for a, b in zip(sols, sols[1:])]
    return SequenceResult(eps_list, sols, diffs)


def comparison_check(sol_hi: GridSolution, sol_lo: GridSolution,
                     slack: float = ORDER_SLACK) -> tuple[int, float]:
    """Count nodes where sol_hi < sol_lo - slack; also return the largest violation."""
    if sol_hi.grid != sol_lo.grid:
        raise ValueError("solutions live on different grids")
    gap = sol_lo.values - sol_hi.values
    bad = gap > slack
    return int(bad.sum()), float(max(gap.max(), 0.0))


@dataclass
class TruncationResult:
    levels: list
    solutions: list
    linear: GridSolution
    max_increase: float  # largest u_{k'} - u_k over consecutive levels
    max_excess: float  # largest u_k - linear solution
    min_value: float


def monotone_truncation_sequence(p: float, measure: BoundaryMeasure, grid: PolarGrid,
                                 levels: Sequence[float], opts: SolverOptions | None = None,
                                 ) -> TruncationResult:
    """Solve with boundary absorption min{u^p, k^p} for increasing levels k.

    The sequence must be pointwise nonincreasing in k and lie between 0 and
    the solution of the linear problem with the same data.
    """
    levels = [float(k) for k in levels]
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be strictly increasing")
    if np.any(mollify_measure(measure, grid) < 0):
        raise ValueError("truncation scheme needs nonnegative data")
    linear = solve_linear(measure, grid)
    sols = [solve_nonlinear(Truncated(Power(p), k), measure, grid, opts) for k in levels]
    inc = max([float(np.max(b.values - a.values)) for a, b in zip(sols, sols[1:])] + [0.0])
    excess = max(float(np.max(s.values - linear.values)) for s in sols)
    low = min(float(np.min(s.values)) for s in sols)
    if inc > ORDER_SLACK:
        raise MonotonicityError(f"truncated solutions increase with the level by {inc:.3e}")
    if excess > ORDER_SLACK or low < -ORDER_SLACK:
        raise MonotonicityError(f"truncated solutions leave [0, linear] (excess {excess:.3e}, "
                                f"min {low:.3e})")
    return TruncationResult(levels, sols, linear, inc, excess, low)


# --------------------------------------------------------------------------
# near-field kernel fits

def default_window(grid: PolarGrid, epsilon: float) -> tuple[float, float]:
    """[max(4 spacings, 2ε), 0.2 R] measured from the boundary point."""
    spacing = max(grid.dr, grid.boundary_spacing)
    return max(4.0 * spacing, 2.0 * epsilon), 0.2 * grid.R


def inward_ray(grid: PolarGrid, angle: float, distances: np.ndarray) -> np.ndarray:
    z = grid.boundary_point(angle)
    return z[None, :] * (1.0 - distances[:, None] / grid.R)


@dataclass(frozen=True)
class KernelFitPoint:
    epsilon: float
    value: float  # 2D: coefficient of ln(1/d); 3D: log-log slope
    window: tuple


@dataclass
class KernelFit:
    mode: GridMode
    weight: float
    points: list = field(default_factory=list)

    @property
    def value(self) -> float:
        return self.points[-1].value

    @property
    def expected(self) -> float:
        return self.weight / math.pi if self.mode is GridMode.DISK_2D else -1.0


def fit_near_field(grid: PolarGrid, d: np.ndarray, u: np.ndarray) -> float:
    if grid.mode is GridMode.DISK_2D:
        # u ≈ c ln(1/d) + b + e d
        A = np.column_stack([np.log(1.0 / d), np.ones_like(d), d])
        coef, *_ = np.linalg.lstsq(A, u, rcond=None)
        return float(coef[0])
    if np.any(u <= 0):
        raise ValueError("log-log fit needs positive samples")
    return float(np.polyfit(np.log(d), np.log(u), 1)[0])


def kernel_estimate(grid: PolarGrid, z: float, eps_list: Sequence[float], weight: float = 1.0,
                    window: tuple | None = None, samples: int = 40) -> KernelFit:
    """Fit the near-field law of the linear solution with mollified data weight·δ_z."""
    fit = KernelFit(grid.mode, weight)
    for eps in eps_list:
        lo, hi = window if window is not None else default_window(grid, eps)
        if not (lo < hi <= grid.R) or lo < 2.0 * grid.dr or lo < eps:
            raise ValueError(f"fit window [{lo:.3g}, {hi:.3g}] is outside the resolved region")
        sol = solve_linear(BoundaryMeasure(atoms=[(z, weight)], epsilon=eps), grid)
        d = np.geomspace(lo, hi, samples)
        u = sol(inward_ray(grid, z, d))
        fit.points.append(KernelFitPoint(float(eps), fit_near_field(grid, d, u), (lo, hi)))
    return fit


# --------------------------------------------------------------------------
# exploratory runs

@dataclass
class RefinementRow:
    n: int
    value: float
    difference: float
    ratio: float


def grid_refinement(mode: GridMode, sizes: Sequence[int], density: float = 1.0,
                    ) -> list[RefinementRow]:
    """Centre value of the linear problem with uniform boundary flux on refined grids."""
    rows: list[RefinementRow] = []
    for n in sizes:
        val = solve_linear(BoundaryMeasure(density=density), PolarGrid(mode, n, n)).center
        diff = val - rows[-1].value if rows else math.nan
        ratio = rows[-1].difference / diff if len(rows) >= 2 and diff != 0 else math.nan
        rows.append(RefinementRow(n, val, diff, ratio))
    return rows


@dataclass(frozen=True)
class ProbeRow:
    epsilon: float
    probes: tuple  # solution values at the probe distances
    iterations: int


def removability_experiment(p: float, grid: PolarGrid, weight: float,
                            eps_list: Sequence[float], probe_distances: Sequence[float],
                            opts: SolverOptions | None = None) -> list[ProbeRow]:
    """Supercritical Dirac data with shrinking ε; reports probe values only."""
    rows = []
    d = np.asarray(probe_distances, dtype=float)
    for eps in eps_list:
        sol = solve_nonlinear(Power(p), BoundaryMeasure(atoms=[(0.0, weight)], epsilon=eps),
                              grid, opts)
        vals = sol(inward_ray(grid, 0.0, d))
        rows.append(ProbeRow(float(eps), tuple(float(v) for v in vals), sol.iterations))
    return rows


__all__ = ["KernelFit", "KernelFitPoint", "MonotonicityError", "ProbeRow", "RefinementRow",
           "SequenceResult", "TruncationResult", "comparison_check", "default_window",
           "fit_near_field", "grid_refinement", "inward_ray", "kernel_estimate",
           "monotone_truncation_sequence", "removability_experiment", "theorem_d_sequence"]
