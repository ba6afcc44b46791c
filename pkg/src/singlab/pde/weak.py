"""Weak-formulation residuals against Neumann-compatible test functions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy.special import eval_legendre

from .grid import GridMode, PolarGrid
from .measure import BoundaryMeasure, mollify_measure
from .solver import GridSolution


@dataclass(frozen=True)
class NeumannTestFunction:
    """ξ(r, angle) = ρ(r) Y(angle) with ρ(r) = r^n - n/(n+2) r^{n+2}, so ρ'(1) = 0.

    ``n = k + 2m`` where ``k`` is the angular order; ``kind`` is ``cos``/``sin``
    on the disk and ``legendre`` on the axisymmetric ball.
    """

    k: int
    m: int
    kind: str

    @property
    def n(self) -> int:
        return self.k + 2 * self.m

    def _angular(self, ang):
        if self.kind == "cos":
            return np.cos(self.k * ang)
        if self.kind == "sin":
            return np.sin(self.k * ang)
        return eval_legendre(self.k, np.cos(ang))

    def _eigen(self, dim: int) -> float:
        return self.k ** 2 if dim == 2 else self.k * (self.k + 1)

    def values(self, r, ang) -> np.ndarray:
        n = self.n
        rho = r ** n - (n / (n + 2.0)) * r ** (n + 2)
        return rho * self._angular(ang)

    def shifted_operator(self, r, ang, dim: int) -> np.ndarray:
        """(-Δξ + ξ) evaluated exactly."""
        n, lam = self.n, self._eigen(dim)
        c = n / (n + 2.0)
        # Δ(r^q Y) = (q(q + d - 2) - λ) r^{q-2} Y
        a1 = n * (n + dim - 2) - lam
        a2 = (n + 2) * (n + dim) - lam
        lap = -c * a2 * r ** n
        if a1 != 0:  # only when m >= 1, so n >= 2
            lap = lap + a1 * r ** (n - 2)
        return (-lap + r ** n - c * r ** (n + 2)) * self._angular(ang)


def test_family(mode: GridMode, size: int) -> list[NeumannTestFunction]:
    """First ``size`` members, ordered by total degree; member 0 is ξ = 1."""
    out: list[NeumannTestFunction] = []

    def gen() -> Iterator[NeumannTestFunction]:
        degree = 0
        while True:
            for k in range(degree, -1, -1):
                if (degree - k) % 2:
                    continue
                m = (degree - k) // 2
                if mode is GridMode.DISK_2D:
                    yield NeumannTestFunction(k, m, "cos")
                    if k > 0:
                        yield NeumannTestFunction(k, m, "sin")
                else:
                    yield NeumannTestFunction(k, m, "legendre")
            degree += 1

    for xi in gen():
        if len(out) >= size:
            break
        out.append(xi)
    return out


def weak_terms(sol: GridSolution, measure: BoundaryMeasure, xi: NeumannTestFunction):
    """Return (∫u(-Δξ+ξ), ∫g(u)ξ, ∫ξ dμ) by grid quadrature."""
    grid = sol.grid
    R, A = np.meshgrid(grid.r, grid.ang, indexing="ij")
    vol = float(np.sum(grid.volume_weights * sol.values * xi.shifted_operator(R, A, grid.dim)))
    xb = xi.values(np.ones(grid.n_ang), grid.ang)
    wb = grid.boundary_weights
    bnd = float(np.sum(wb * sol.g(sol.trace) * xb))
    mu = mollify_measure(measure, grid)
    data = float(np.sum(wb * mu * xb))
    return vol, bnd, data


def weak_residual(sol: GridSolution, measure: BoundaryMeasure | None = None,
                  test_family_size: int = 12) -> float:
    """Max over the test family of |∫u(-Δξ+ξ) + ∫g(u)ξ - ∫ξdμ| / (1 + |∫ξdμ|)."""
    measure = measure if measure is not None else sol.measure
    worst = 0.0
    for xi in test_family(sol.grid.mode, test_family_size):
        vol, bnd, data = weak_terms(sol, measure, xi)
        worst = max(worst, abs(vol + bnd - data) / (1.0 + abs(data)))
    return worst


@dataclass(frozen=True)
class MassBalance:
    interior: float  # ∫_Ω u
    boundary: float  # ∫_∂Ω g(u)
    data: float  # μ(∂Ω)

    @property
    def lhs(self) -> float:
        return self.interior + self.boundary

    @property
    def relative_error(self) -> float:
        if self.data == 0:
            return abs(self.lhs)
        return abs(self.lhs - self.data) / abs(self.data)


def mass_balance(sol: GridSolution, measure: BoundaryMeasure | None = None) -> MassBalance:
    measure = measure if measure is not None else sol.measure
    vol, bnd, data = weak_terms(sol, measure, NeumannTestFunction(0, 0, "cos" if sol.grid.dim == 2
                                                           else "legendre"))
    return MassBalance(vol, bnd, data)


def l1_norm(grid: PolarGrid, values: np.ndarray) -> float:
    return float(np.sum(grid.volume_weights * np.abs(values)))


__all__ = ["MassBalance", "NeumannTestFunction", "l1_norm", "mass_balance", "test_family",
           "weak_residual", "weak_terms"]
