"""Problem parameters, critical exponents and the regime classifier.

The boundary exponent ``p`` of the model problem

    -Δu = 0 in R^N_+,   -∂u/∂x_N + |u|^{p-1} u = 0 on ∂R^N_+ \\ {0}

is compared against two thresholds, ``p_low = N/(N-1)`` and
``p_high = (N-1)/(N-2)``. Separable solutions u = r^{-1/(p-1)} ω(σ) satisfy
an eigenvalue-type problem on the hemisphere whose zeroth-order coefficient
is ``ell``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import cKDTree


class Regime(str, enum.Enum):
    SUPERCRITICAL = "SUPERCRITICAL"  # p >= p_high
    INTERVAL = "INTERVAL"  # p_low < p < p_high
    LOW = "LOW"  # 1 < p <= p_low


class SolutionSet(str, enum.Enum):
    ONLY_ZERO = "ONLY_ZERO"
    ONLY_ZERO_AMONG_NONNEGATIVE = "ONLY_ZERO_AMONG_NONNEGATIVE"
    THREE_ELEMENT_SET = "THREE_ELEMENT_SET"


@dataclass(frozen=True)
class ProblemParams:
    N: int
    p: float

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N:
            raise ValueError(f"dimension N must be an integer, got {self.N!r}")
        if self.N < 2:
            raise ValueError(f"dimension N must be >= 2, got {self.N}")
        if not (math.isfinite(self.p) and self.p > 1.0):
            raise ValueError(f"exponent p must be a finite real > 1, got {self.p}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "p", float(self.p))

    @property
    def beta(self) -> float:
        """Decay rate 1/(p-1) of self-similar solutions."""
        return 1.0 / (self.p - 1.0)


@dataclass(frozen=True)
class CriticalData:
    N: int
    p: float
    ell: float
    p_low: float
    p_high: float
    regime: Regime


def ell_coefficient(N: int, p: float) -> float:
    b = 1.0 / (p - 1.0)
    return b * (b + 2.0 - N)


def critical_exponents(params: ProblemParams) -> CriticalData:
    N, p = params.N, params.p
    p_low = N / (N - 1.0)
    p_high = (N - 1.0) / (N - 2.0) if N >= 3 else math.inf
    if p >= p_high:
        regime = Regime.SUPERCRITICAL
    elif p > p_low:
        regime = Regime.INTERVAL
    else:
        regime = Regime.LOW
    return CriticalData(N=N, p=p, ell=ell_coefficient(N, p), p_low=p_low,
                        p_high=p_high, regime=regime)


def classify_solution_set(data: CriticalData) -> SolutionSet:
    """Structure of the set of separable profiles for N >= 3."""
    if data.N < 3:
        raise ValueError("N = 2 is governed by the closed form; use singlab.profile2d.solve_profile2d")
    if data.regime is Regime.SUPERCRITICAL:
        return SolutionSet.ONLY_ZERO
    if data.regime is Regime.LOW:
        return SolutionSet.ONLY_ZERO_AMONG_NONNEGATIVE
    return SolutionSet.THREE_ELEMENT_SET


@dataclass(frozen=True)
class ScaledSamples:
    samples: list  # list of (point, value)
    excluded: list  # points x whose image k*x was not sampled


def apply_scaling(samples: Sequence[tuple[Iterable[float], float]], k: float,
                  p: float) -> ScaledSamples:
    """Apply T_k[u](x) = k^{1/(p-1)} u(kx) to point samples of u.

    A sample point x is kept only when k*x is itself one of the sample
    points; otherwise it is reported in ``excluded``.
    """
    if not k > 0:
        raise ValueError(f"scaling factor k must be positive, got {k}")
    if not p > 1:
        raise ValueError(f"exponent p must be > 1, got {p}")
    pts = np.array([np.atleast_1d(np.asarray(x, dtype=float)) for x, _ in samples])
    if len(pts) == 0:
        return ScaledSamples([], [])
    vals = np.array([float(v) for _, v in samples])
    tol = 1e-9 * max(1.0, float(np.max(np.abs(pts))))
    dist, idx = cKDTree(pts).query(k * pts)
    factor = k ** (1.0 / (p - 1.0))
    kept, excluded = [], []
    for x, d, j in zip(pts, dist, idx):
        if d <= tol:
            kept.append((tuple(x.tolist()), factor * vals[j]))
        else:
            excluded.append(tuple(x.tolist()))
    return ScaledSamples(kept, excluded)
