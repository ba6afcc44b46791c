"""Finite-difference solver for -Δu + u = 0 with ∂u/∂n + g(u) = μ on the boundary.

The unknowns are the centre value followed by the rings i = 1..n_r-1 in
row-major (ring, angle) order. Interior rows use the divergence form of the
polar Laplacian; the outer ring eliminates a ghost ring through the centred
Neumann condition (u_ghost - u_{R-1}) / (2Δr) = μ - g(u_R). Every row is
scaled to unit linear diagonal so residuals are nodal corrections.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..growth import Nonlinearity, Zero
from ..regimes import ProblemParams
from .grid import GridMode, PolarGrid
from .measure import BoundaryMeasure, mollify_measure

log = logging.getLogger(__name__)


class SolverError(RuntimeError):
    def __init__(self, message: str, history: list[float] | None = None):
        super().__init__(message)
        self.history = list(history or [])


@dataclass(frozen=True)
class SolverOptions:
    tol: float = 1e-10
    max_iter: int = 200
    damping: float = 1.0  # initial Newton step length
    max_halvings: int = 5
    stagnation_window: int = 50


@dataclass(eq=False)
class GridSolution:
    grid: PolarGrid
    values: np.ndarray  # shape (n_r, n_ang); ring 0 repeats the centre value
    g: Nonlinearity
    measure: BoundaryMeasure | None = None
    params: ProblemParams | None = None
    iterations: int = 0
    final_residual: float = 0.0
    history: list = field(default_factory=list)

    @property
    def trace(self) -> np.ndarray:
        return self.values[-1]

    @property
    def interior(self) -> np.ndarray:
        return self.values[:-1]

    @property
    def center(self) -> float:
        return float(self.values[0, 0])

    def __call__(self, x):
        return self.grid.interpolator(self.values)(x)


@dataclass(frozen=True)
class _System:
    K: sp.csr_matrix  # row-scaled linear operator
    c: np.ndarray  # row-scaled coupling of (g(u_R) - μ) on boundary rows
    boundary: slice


def _index(grid: PolarGrid, i, j):
    return 1 + (np.asarray(i) - 1) * grid.n_ang + np.asarray(j)


_CACHE: dict = {}


def assemble(grid: PolarGrid) -> _System:
    """Sparse operator for -Δ + I with homogeneous Neumann ghost elimination."""
    if grid in _CACHE:
        return _CACHE[grid]
    d, n_r, n_a = grid.dim, grid.n_r, grid.n_ang
    r, dr, da = grid.r, grid.dr, grid.dang
    V, S = grid.ang_measure, grid.ang_flux
    rows, cols, vals = [], [], []

    def add(ri, ci, v):
        rows.append(np.broadcast_to(ri, np.shape(v)).ravel())
        cols.append(np.broadcast_to(ci, np.shape(v)).ravel())
        vals.append(np.asarray(v, dtype=float).ravel())

    # centre: flux balance over the ball of radius dr/2
    rho = 0.5 * dr
    vol = rho ** d * V.sum() / d
    flux = rho ** (d - 1) * V / dr / vol
    add(0, 0, 1.0 + flux.sum())
    add(np.zeros(n_a, dtype=int), _index(grid, 1, np.arange(n_a)), -flux)

    j = np.arange(n_a)
    if grid.mode is GridMode.DISK_2D:
        jp, jm = (j + 1) % n_a, (j - 1) % n_a
        sp_, sm_ = np.ones(n_a), np.ones(n_a)
    else:
        jp, jm = np.minimum(j + 1, n_a - 1), np.maximum(j - 1, 0)
        sp_ = np.append(S, 0.0)
        sm_ = np.insert(S, 0, 0.0)
    ang_p, ang_m = sp_ / (da * V), sm_ / (da * V)

    for i in range(1, n_r):
        row = _index(grid, i, j)
        ri = r[i]
        a_p, a_m = ang_p / ri ** 2, ang_m / ri ** 2
        if i < n_r - 1:
            w_out = (r[i] + 0.5 * dr) ** (d - 1) / (ri ** (d - 1) * dr ** 2)
            w_in = (r[i] - 0.5 * dr) ** (d - 1) / (ri ** (d - 1) * dr ** 2)
            col_in = 0 if i == 1 else _index(grid, i - 1, j)
            add(row, _index(grid, i + 1, j), -np.full(n_a, w_out))
        else:
            w_out = 0.0
            w_in = 2.0 / dr ** 2
            col_in = _index(grid, i - 1, j)
        diag = 1.0 + w_out + w_in + a_p + a_m
        add(row, row, diag)
        add(row, col_in, -np.full(n_a, w_in))
        add(row, _index(grid, i, jp), -a_p)
        add(row, _index(grid, i, jm), -a_m)

    n = grid.n_unknowns
    K = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(n, n)).tocsr()
    K.sum_duplicates()
    scale = 1.0 / K.diagonal()
    K = sp.diags(scale) @ K
    bslice = slice(n - n_a, n)
    c = 2.0 * (1.0 + 0.5 * dr) ** (d - 1) / dr * scale[bslice]
    system = _System(K.tocsr(), c, bslice)
    _CACHE[grid] = system
    return system


def _expand(grid: PolarGrid, U: np.ndarray) -> np.ndarray:
    vals = np.empty((grid.n_r, grid.n_ang))
    vals[0] = U[0]
    vals[1:] = U[1:].reshape(grid.n_r - 1, grid.n_ang)
    return vals


def _residual(system: _System, g: Nonlinearity, U: np.ndarray, mu: np.ndarray) -> np.ndarray:
    F = system.K @ U
    F[system.boundary] += system.c * (g(U[system.boundary]) - mu)
    return F


def solve_nonlinear(g: Nonlinearity, measure: BoundaryMeasure, grid: PolarGrid,
                    opts: SolverOptions | None = None, params: ProblemParams | None = None,
                    initial: np.ndarray | None = None) -> GridSolution:
    """Solve the discrete nonlinear Neumann problem by damped Newton.

    Newton steps are halved while the max nodal residual increases; after
    ``opts.max_halvings`` failed halvings a Picard step with frozen secant
    slope of g is taken instead.
    """
    opts = opts or SolverOptions()
    if params is not None and params.N != grid.dim:
        raise ValueError(f"params.N = {params.N} does not match the {grid.dim}-D grid")
    system = assemble(grid)
    mu = mollify_measure(measure, grid)
    n = grid.n_unknowns
    b = system.boundary
    U = np.zeros(n) if initial is None else np.array(initial, dtype=float).copy()
    if initial is not None and U.shape != (n,):
        U = _pack(grid, np.asarray(initial, dtype=float))

    F = _residual(system, g, U, mu)
    res = float(np.max(np.abs(F)))
    history = [res]
    linear = isinstance(g, Zero)
    it = 0
    while res >= opts.tol:
        if it >= opts.max_iter:
            raise SolverError(f"no convergence in {opts.max_iter} iterations "
                              f"(residual {res:.3e})", history)
        if not np.isfinite(res):
            raise SolverError("non-finite residual", history)
        it += 1
        ub = U[b]
        J = system.K + sp.csr_matrix((system.c * g.derivative(ub), (np.arange(n)[b], np.arange(n)[b])),
                              shape=(n, n))
        step = spla.spsolve(J.tocsc(), -F)
        lam = opts.damping
        accepted = False
        for _ in range(opts.max_halvings + 1):
            U_try = U + lam * step
            F_try = _residual(system, g, U_try, mu)
            r_try = float(np.max(np.abs(F_try)))
            if np.isfinite(r_try) and (r_try < res or linear):
                accepted = True
                break
            lam *= 0.5
        if not accepted:
            U_try, F_try, r_try = _picard_step(system, g, U, mu)
        U, F, res = U_try, F_try, r_try
        history.append(res)
        log.debug("iteration %d: residual %.3e (step %.3g)", it, res, lam)
        w = opts.stagnation_window
        if len(history) > w and history[-1] > 0.99 * history[-1 - w]:
            raise SolverError(f"stagnation: residual reduced by < 1% over {w} iterations",
                              history)
    return GridSolution(grid, _expand(grid, U), g, measure, params, it, res, history)


def _picard_step(system: _System, g: Nonlinearity, U: np.ndarray, mu: np.ndarray):
    n = U.size
    b = system.boundary
    ub = U[b]
    gu = g(ub)
    with np.errstate(divide="ignore", invalid="ignore"):
        slope = np.where(np.abs(ub) > 1e-14, gu / ub, g.derivative(ub))
    slope = np.maximum(slope, 0.0)
    idx = np.arange(n)[b]
    A = system.K + sp.csr_matrix((system.c * slope, (idx, idx)), shape=(n, n))
    rhs = np.zeros(n)
    rhs[b] = system.c * (mu - gu + slope * ub)
    U_new = spla.spsolve(A.tocsc(), rhs)
    F = _residual(system, g, U_new, mu)
    return U_new, F, float(np.max(np.abs(F)))


def _pack(grid: PolarGrid, values: np.ndarray) -> np.ndarray:
    values = values.reshape(grid.n_r, grid.n_ang)
    return np.concatenate([[values[0].mean()], values[1:].ravel()])


def solve_linear(measure: BoundaryMeasure, grid: PolarGrid) -> GridSolution:
    return solve_nonlinear(Zero(), measure, grid)
