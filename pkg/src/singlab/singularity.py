"""Characteristic exponents, Emden-Fowler variables and singularity classification.

Near an isolated boundary singularity a positive solution behaves in one of
three ways along rays r → 0:

* STRONG:    u ~ r^{-1/(p-1)} ω_s(σ)
* WEAK:      u ~ k r^{2-N}, or k ln(1/r) when N = 2
* REMOVABLE: u stays bounded

``classify_singularity`` fits all three laws on a window of radii and keeps
the one with the smallest relative misfit.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .pde.grid import GridMode
from .pde.solver import GridSolution
from .regimes import ProblemParams

TIE_FRACTION = 0.10
MIN_SAMPLES = 6
MIN_RAYS = 3


@dataclass(frozen=True)
class CharacteristicRoots:
    delta: float
    xi1: float
    xi2: float
    theta1: float
    theta2: float


def characteristic_roots(N: int, p: float, delta: float) -> CharacteristicRoots:
    """Roots of the characteristic polynomial at shift δ and the associated decay rates.

    ξ₁ = p/(p-1) - δ and ξ₂ = ξ₁ - N; θ₁ = ξ₁ - 1 and θ₂ = ξ₂ + 1.
    """
    if not p > 1:
        raise ValueError(f"p must be > 1, got {p}")
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    q = p / (p - 1.0)
    b = 1.0 / (p - 1.0)
    return CharacteristicRoots(float(delta), q - delta, q - N - delta, b - delta,
                               b + 2.0 - N - delta)


def emden_fowler(r, u, params: ProblemParams) -> tuple[np.ndarray, np.ndarray]:
    """(t, v) = (ln r, r^{1/(p-1)} u) for samples along one ray."""
    r = np.asarray(r, dtype=float)
    u = np.asarray(u, dtype=float)
    if np.any(r <= 0):
        raise ValueError("radii must be positive")
    if r.size > 1 and np.any(np.diff(r) <= 0):
        raise ValueError("radii must be strictly increasing")
    return np.log(r), r ** params.beta * u


def inverse_emden_fowler(t, v, params: ProblemParams) -> tuple[np.ndarray, np.ndarray]:
    r = np.exp(np.asarray(t, dtype=float))
    return r, r ** (-params.beta) * np.asarray(v, dtype=float)


class SingularityClass(str, enum.Enum):
    STRONG = "STRONG"
    WEAK = "WEAK"
    REMOVABLE = "REMOVABLE"


class AmbiguousError(RuntimeError):
    def __init__(self, message: str, residuals: dict):
        super().__init__(message)
        self.residuals = dict(residuals)


@dataclass(frozen=True)
class SingularityReport:
    cls: SingularityClass
    k: float | None  # WEAK only: coefficient of r^{2-N}, or of -ln r in 2D
    constant: float  # mean leading coefficient of the selected law over the rays
    fitted_exponent: float  # free log-log slope, NaN if some sample is <= 0
    fit_residual: float
    residuals: dict
    window: tuple

    def to_dict(self) -> dict:
        return {"class": self.cls.value, "k": self.k, "constant": self.constant,
                "exponent": self.fitted_exponent, "residuals": dict(self.residuals),
                "window": list(self.window)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _ray_directions(normal: np.ndarray, tangent: np.ndarray, rays: int) -> np.ndarray:
    psi = np.linspace(-math.pi / 4, math.pi / 4, rays)
    return np.cos(psi)[:, None] * normal[None, :] + np.sin(psi)[:, None] * tangent[None, :]


def _geometry(field, point, params: ProblemParams, normal):
    """Return (evaluator on (n, N) points, base point, inward normal, tangent, spacing)."""
    if isinstance(field, GridSolution):
        grid = field.grid
        if grid.dim != params.N:
            raise ValueError(f"solution is {grid.dim}-D but params.N = {params.N}")
        z = grid.boundary_point(float(point)) if np.ndim(point) == 0 else np.asarray(point, float)
        n = -z / np.linalg.norm(z)
        if grid.mode is GridMode.DISK_2D:
            t = np.array([-n[1], n[0]])
        else:
            t = np.cross(n, [0.0, 1.0, 0.0])
            t /= np.linalg.norm(t)
        spacing = max(grid.dr, grid.boundary_spacing)
        return field, z, n, t, spacing
    z = np.zeros(params.N) if point is None else np.asarray(point, dtype=float)
    n = np.eye(params.N)[-1] if normal is None else np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    t = np.eye(params.N)[0] - n[0] * n
    t /= np.linalg.norm(t)
    return field, z, n, t, 0.0


def _sample_rays(field, point, params, window, rays, samples, normal):
    if rays < MIN_RAYS:
        raise ValueError(f"need at least {MIN_RAYS} rays")
    if samples < MIN_SAMPLES:
        raise ValueError(f"window needs at least {MIN_SAMPLES} samples, got {samples}")
    f, z, n, t, spacing = _geometry(field, point, params, normal)
    if window is None:
        if spacing == 0.0:
            raise ValueError("a window is required for fields not defined on a grid")
        from .pde.studies import default_window
        eps = field.measure.epsilon if field.measure is not None else 0.0
        window = default_window(field.grid, eps)
    lo, hi = (float(w) for w in window)
    if not 0 < lo < hi:
        raise ValueError(f"invalid window {window}")
    if spacing and lo < 2.0 * field.grid.dr:
        raise ValueError(f"window starts at {lo:.3g}, inside the unresolved layer")
    r = np.geomspace(lo, hi, samples)
    dirs = _ray_directions(n, t, rays)
    pts = z[None, None, :] + r[None, :, None] * dirs[:, None, :]
    u = np.asarray(f(pts.reshape(-1, params.N)), dtype=float).reshape(rays, samples)
    if not np.all(np.isfinite(u)):
        raise ValueError("field is not finite on the sampling window")
    return r, u, (lo, hi)


def _fit_law(basis: np.ndarray, u: np.ndarray) -> tuple[float, np.ndarray]:
    """Per-ray fit u_j ≈ C_j basis + b_j; returns (relative residual, C_j)."""
    A = np.column_stack([basis, np.ones_like(basis)])
    coef, *_ = np.linalg.lstsq(A, u.T, rcond=None)
    resid = u.T - A @ coef
    scale = np.linalg.norm(u - u.mean(axis=1, keepdims=True))
    if scale == 0.0:
        scale = max(np.linalg.norm(u), 1e-300)
    return float(np.linalg.norm(resid) / scale), coef[0]


def _loglog_slope(r: np.ndarray, u: np.ndarray) -> float:
    """Common slope with per-ray intercepts, NaN unless all samples are positive."""
    if np.any(u <= 0):
        return math.nan
    x = np.log(r) - np.log(r).mean()
    y = np.log(u) - np.log(u).mean(axis=1, keepdims=True)
    return float(np.sum(y * x[None, :]) / (u.shape[0] * np.dot(x, x)))


def classify_singularity(field: GridSolution | Callable, point, params: ProblemParams,
                         window: tuple | None = None, rays: int = 5, samples: int = 24,
                         normal: Sequence[float] | None = None) -> SingularityReport:
    """Fit the strong, weak and removable laws along rays into the domain.

    ``field`` is a GridSolution (``point`` is then a boundary angle) or a
    callable on Cartesian points of shape (n, N) for a half-space whose
    boundary passes through ``point`` (default the origin) with inner normal
    ``normal`` (default e_N).
    """
    r, u, win = _sample_rays(field, point, params, window, rays, samples, normal)
    N = params.N
    weak_basis = -np.log(r) if N == 2 else r ** (2.0 - N)
    laws = {
        SingularityClass.STRONG: r ** (-params.beta),
        SingularityClass.WEAK: weak_basis,
        SingularityClass.REMOVABLE: r,
    }
    fits = {c: _fit_law(b, u) for c, b in laws.items()}
    residuals = {c.value.lower(): fits[c][0] for c in laws}
    order = sorted(fits, key=lambda c: fits[c][0])
    best, second = order[0], order[1]
    r1, r2 = fits[best][0], fits[second][0]
    if r2 <= (1.0 + TIE_FRACTION) * r1:
        raise AmbiguousError(f"{best.value} and {second.value} fit within "
                             f"{100 * TIE_FRACTION:.0f}% of each other", residuals)
    const = float(np.mean(fits[best][1]))
    k = const if best is SingularityClass.WEAK else None
    return SingularityReport(best, k, const, _loglog_slope(r, u), r1, residuals, win)


def _directions(N: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors in the upper half-space and their polar angles."""
    if N == 2:
        phi = np.linspace(0.0, math.pi, count + 2)[1:-1]
        return np.column_stack([np.cos(phi), np.sin(phi)]), phi
    phi = np.linspace(0.0, 0.5 * math.pi, count + 1)[:-1]
    d = np.zeros((count, N))
    d[:, 0] = np.sin(phi)
    d[:, -1] = np.cos(phi)
    return d, phi


def strong_limit_check(field: Callable, profile, radii: Sequence[float],
                       directions: int = 64) -> list[float]:
    """max_σ |r^{1/(p-1)} u(rσ) - ω_s(σ)| at each radius, for a half-space field at 0.

    ``profile`` is a Profile2D (φ measured from the x₁ axis) or a RadialProfile
    (φ measured from the x_N axis). Directions avoid the boundary.
    """
    N = 2 if not hasattr(profile, "N") else profile.N
    beta = 1.0 / (profile.p - 1.0)
    dirs, phi = _directions(N, directions)
    target = np.asarray(profile(phi), dtype=float)
    out = []
    for rad in radii:
        if rad <= 0:
            raise ValueError("radii must be positive")
        vals = np.asarray(field(rad * dirs), dtype=float)
        out.append(float(np.max(np.abs(rad ** beta * vals - target))))
    return out


__all__ = ["AmbiguousError", "CharacteristicRoots", "SingularityClass", "SingularityReport",
           "characteristic_roots", "classify_singularity", "emden_fowler",
           "inverse_emden_fowler", "strong_limit_check"]
