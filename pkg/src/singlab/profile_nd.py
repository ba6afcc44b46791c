"""Positive separable profiles on the hemisphere for N >= 3.

A profile depends only on the polar angle φ ∈ [0, π/2] measured from the
inner normal and solves

    ω'' + (N-2) cot φ ω' + ℓ ω = 0,   ω'(0) = 0,   ω'(π/2) + ω(π/2)^p = 0.

Two independent solvers are provided: shooting in the initial value
ω(0) = α, and direct minimisation of the discretised energy

    J(η) = |S^{N-2}| ∫ (½ η'² - ½ ℓ η²) sin^{N-2}φ dφ + |S^{N-2}| |η(π/2)|^{p+1}/(p+1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import make_interp_spline
from scipy.linalg import LinAlgError, cholesky_banded, cho_solve_banded
from scipy.optimize import brentq

from .kernels import rk4_hemisphere
from .regimes import ProblemParams, ell_coefficient

HALF_PI = 0.5 * math.pi
PHI_START = 1e-3
SCAN_RANGE = (1e-3, 1e3)
SCAN_POINTS = 61


class IntegrationError(RuntimeError):
    def __init__(self, message: str, phi: float):
        super().__init__(message)
        self.phi = phi


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, grad_norm: float):
        super().__init__(message)
        self.grad_norm = grad_norm


class MultipleRootsError(RuntimeError):
    pass


def sphere_area(n: int) -> float:
    """|S^n|, the area of the unit n-sphere in R^{n+1}."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return 2.0
    if n == 1:
        return 2.0 * math.pi
    return 2.0 * math.pi / (n - 1) * sphere_area(n - 2)


def hemisphere_area(N: int) -> float:
    """|S₊^{N-1}| = |S^{N-1}| / 2."""
    return 0.5 * sphere_area(N - 1)


@dataclass(eq=False)
class RadialProfile:
    N: int
    p: float
    values: np.ndarray  # samples at φ_i = i π/(2M), i = 0..M
    alpha: float = math.nan
    end_derivative: float = math.nan

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or self.values.size < 3:
            raise ValueError("a profile needs at least 3 nodes")
        if math.isnan(self.alpha):
            self.alpha = float(self.values[0])

    @property
    def M(self) -> int:
        return self.values.size - 1

    @property
    def h(self) -> float:
        return HALF_PI / self.M

    @property
    def phi(self) -> np.ndarray:
        return np.linspace(0.0, HALF_PI, self.M + 1)

    @property
    def params(self) -> ProblemParams:
        return ProblemParams(self.N, self.p)

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    @cached_property
    def _spline(self):
        # ω is even in φ; mirror a few nodes so the spline sees the symmetry
        k = min(5, self.M)
        phi = np.concatenate([-self.phi[k:0:-1], self.phi])
        vals = np.concatenate([self.values[k:0:-1], self.values])
        return make_interp_spline(phi, vals, k=k)

    def __call__(self, phi):
        out = self._spline(np.abs(np.asarray(phi, dtype=float)))
        return out if np.ndim(out) else float(out)

    def resample(self, M: int) -> "RadialProfile":
        if self.M % M == 0:
            vals = self.values[:: self.M // M].copy()
        else:
            vals = self._spline(np.linspace(0.0, HALF_PI, M + 1))
        return RadialProfile(self.N, self.p, vals, self.alpha, self.end_derivative)

    def end_slope(self) -> float:
        """ω'(π/2): the stored value, else a one-sided second-order difference."""
        if not math.isnan(self.end_derivative):
            return self.end_derivative
        v = self.values
        return float((3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * self.h))

    def to_dict(self) -> dict:
        return {"N": self.N, "p": self.p, "grid_spec": {"M": self.M},
                "values": [float(v) for v in self.values],
                "alpha": self.alpha, "end_derivative": self.end_derivative}

    @classmethod
    def from_dict(cls, data: dict) -> "RadialProfile":
        values = np.asarray(data["values"], dtype=float)
        M = int(data["grid_spec"]["M"])
        if values.size != M + 1:
            raise ValueError(f"grid_spec M = {M} but {values.size} values given")
        return cls(int(data["N"]), float(data["p"]), values,
                   float(data.get("alpha", math.nan)),
                   float(data.get("end_derivative", math.nan)))


@dataclass(frozen=True)
class NoSolution:
    params: ProblemParams
    reason: str
    scan: tuple = field(default=(), repr=False)  # (alpha, F(alpha)) pairs

    def to_dict(self) -> dict:
        return {"N": self.params.N, "p": self.params.p, "result": "NO_SOLUTION",
                "reason": self.reason}


@dataclass(frozen=True)
class EnergyValue:
    total: float
    bulk: float
    boundary: float


# --------------------------------------------------------------------------
# shooting

def hemisphere_series(N: int, ell: float, phi, terms: int = 200):
    """Regular solution with ω(0) = 1 and its derivative, by the series in z = sin²(φ/2).

    The coefficients obey t_{k+1} = t_k (k(k+N-2) - ℓ) / ((k+1)(k+(N-1)/2)).
    """
    phi = np.asarray(phi, dtype=float)
    z = np.sin(0.5 * phi) ** 2
    w = np.ones_like(z)
    dwdz = np.zeros_like(z)
    t = 1.0
    zk = np.ones_like(z)  # z^k
    c = 0.5 * (N - 1)
    for k in range(terms):
        t_next = t * (k * (k + N - 2) - ell) / ((k + 1) * (k + c))
        dwdz += (k + 1) * t_next * zk
        zk = zk * z
        term = t_next * zk
        w += term
        t = t_next
        if t == 0.0 or np.all(np.abs(term) <= 1e-17 * np.abs(w)):
            break
    return w, dwdz * 0.5 * np.sin(phi)


def integrate_shooting(params: ProblemParams, alpha: float, steps: int = 10000):
    """Integrate from the pole with ω(0) = α, ω'(0) = 0 to the equator.

    The series start covers the nodes up to φ ≈ 1e-3, then fixed-step RK4
    takes over. Returns (ω(π/2), ω'(π/2), trajectory).
    """
    N = params.N
    if N < 3:
        raise ValueError("shooting is for N >= 3; N = 2 has a closed form")
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if steps < 100:
        raise ValueError("use at least 100 steps")
    ell = ell_coefficient(N, params.p)
    h = HALF_PI / steps
    i0 = max(math.ceil(PHI_START / h), 1)
    phi_head = h * np.arange(i0 + 1)
    w_head, dw_head = hemisphere_series(N, ell, phi_head)
    w_tail, dw_tail, blow = rk4_hemisphere(float(N - 2), ell, i0 * h, float(w_head[-1]),
                                           float(dw_head[-1]), h, steps - i0)
    if blow >= 0:
        raise IntegrationError(f"trajectory blew up at phi = {(i0 + blow) * h:.6g}",
                               (i0 + blow) * h)
    w = alpha * np.concatenate([w_head[:-1], w_tail])
    w_end, dw_end = alpha * float(w_tail[-1]), alpha * float(dw_tail[-1])
    return w_end, dw_end, RadialProfile(N, params.p, w, alpha, dw_end)


def shooting_function(params: ProblemParams, alpha: float, steps: int = 10000) -> float:
    """F(α) = ω'(π/2) + |ω(π/2)|^{p-1} ω(π/2)."""
    w, dw, _ = integrate_shooting(params, alpha, steps)
    return dw + abs(w) ** (params.p - 1.0) * w


def shoot_solve(params: ProblemParams, steps: int = 10000, scan_points: int = SCAN_POINTS,
                scan_range: tuple = SCAN_RANGE) -> RadialProfile | NoSolution:
    """Bracket the root of F over a geometric α scan, then refine with Brent's method."""
    if scan_points < 2:
        raise ValueError("scan needs at least two points")
    alphas = np.geomspace(scan_range[0], scan_range[1], scan_points)
    F = np.array([shooting_function(params, a, steps) for a in alphas])
    scan = tuple(zip(alphas.tolist(), F.tolist()))
    sgn = np.sign(F)
    changes = np.nonzero(sgn[:-1] * sgn[1:] <= 0)[0]
    exact = np.nonzero(F == 0)[0]
    if changes.size == 0:
        return NoSolution(params, "no sign change of the shooting function over the scan", scan)
    # a node with F = 0 shows up in two adjacent brackets
    distinct = {int(i) + (1 if F[i + 1] == 0 and F[i] != 0 else 0) for i in changes}
    if len(distinct) > 1:
        raise MultipleRootsError(f"{len(distinct)} sign changes of the shooting function at "
                                 f"alpha ≈ {[float(alphas[i]) for i in sorted(distinct)]}")
    i = int(changes[0])
    if exact.size:
        a_star = float(alphas[exact[0]])
    else:
        a_star = brentq(lambda a: shooting_function(params, a, steps), alphas[i], alphas[i + 1],
                        xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    _, _, prof = integrate_shooting(params, a_star, steps)
    if np.any(prof.values < 0):
        return NoSolution(params, "root found but the trajectory changes sign", scan)
    return prof


# --------------------------------------------------------------------------
# energy and the variational solver

@dataclass(frozen=True)
class _Quadrature:
    h: float
    stiff: np.ndarray  # sin^{N-2} at cell midpoints, divided by h
    mass: np.ndarray  # nodal weights for ∫ η² sin^{N-2}
    dual: np.ndarray  # dual-cell measure used to normalise gradients


def _quadrature(N: int, M: int) -> _Quadrature:
    h = HALF_PI / M
    phi = np.linspace(0.0, HALF_PI, M + 1)
    mid = phi[:-1] + 0.5 * h
    s_mid = np.sin(mid) ** (N - 2)
    tau = h * np.sin(phi) ** (N - 2)
    tau[0] *= 0.5
    tau[-1] *= 0.5
    # rescale so constants integrate exactly
    tau *= (hemisphere_area(N) / sphere_area(N - 2)) / tau.sum()
    s_ext = np.concatenate([[s_mid[0]], s_mid, [s_mid[-1]]])
    dual = 0.5 * h * (s_ext[:-1] + s_ext[1:])
    return _Quadrature(h, s_mid / h, tau, dual)


def _energy_parts(q: _Quadrature, ell: float, p: float, v: np.ndarray, area: float):
    dv = np.diff(v)
    bulk = area * (0.5 * np.dot(q.stiff, dv * dv) - 0.5 * ell * np.dot(q.mass, v * v))
    bnd = area * abs(v[-1]) ** (p + 1.0) / (p + 1.0)
    return bulk, bnd


def _gradient(q: _Quadrature, ell: float, p: float, v: np.ndarray) -> np.ndarray:
    """Gradient of J / |S^{N-2}|."""
    flux = q.stiff * np.diff(v)
    g = -ell * q.mass * v
    g[:-1] -= flux
    g[1:] += flux
    g[-1] += abs(v[-1]) ** (p - 1.0) * v[-1]
    return g


def _hessian_banded(q: _Quadrature, ell: float, p: float, v: np.ndarray, shift: float):
    """Upper banded form (2 x n) of the Hessian plus shift·I."""
    n = v.size
    ab = np.zeros((2, n))
    diag = -ell * q.mass + shift
    diag[:-1] += q.stiff
    diag[1:] += q.stiff
    diag[-1] += p * abs(v[-1]) ** (p - 1.0)
    ab[1] = diag
    ab[0, 1:] = -q.stiff
    return ab


def j_energy(profile: RadialProfile) -> EnergyValue:
    """Discrete energy: midpoint differences for ω', trapezoid weights for ω²."""
    q = _quadrature(profile.N, profile.M)
    ell = ell_coefficient(profile.N, profile.p)
    bulk, bnd = _energy_parts(q, ell, profile.p, profile.values, sphere_area(profile.N - 2))
    return EnergyValue(bulk + bnd, bulk, bnd)


def optimal_constant(params: ProblemParams) -> float:
    """Minimiser of J over constants, or 0 when ℓ <= 0."""
    ell = ell_coefficient(params.N, params.p)
    if ell <= 0:
        return 0.0
    ratio = hemisphere_area(params.N) / sphere_area(params.N - 2)
    return (ell * ratio) ** (1.0 / (params.p - 1.0))


def variational_solve(params: ProblemParams, grid_size: int = 400, tol: float = 1e-9,
                      max_iter: int = 500, initial: np.ndarray | None = None,
                      ) -> RadialProfile:
    """Minimise the discrete energy by modified Newton with Armijo backtracking.

    The gradient is measured in the discrete L² norm of its Riesz
    representative. Iteration stops once both it and the Newton step, each
    divided by max(1, sup|η|), are below ``tol``. Returns |minimiser|.
    """
    N, p = params.N, params.p
    if N < 3:
        raise ValueError("variational solver is for N >= 3")
    if grid_size < 64:
        raise ValueError("grid_size must be >= 64")
    M = grid_size
    q = _quadrature(N, M)
    ell = ell_coefficient(N, p)
    area = sphere_area(N - 2)

    def energy(v):
        b, s = _energy_parts(q, ell, p, v, area)
        return (b + s) / area

    if initial is not None:
        v = np.array(initial, dtype=float)
        if v.shape != (M + 1,):
            raise ValueError(f"initial guess must have {M + 1} values")
    else:
        c0 = optimal_constant(params)
        v = np.full(M + 1, c0 if c0 > 0 else 1.0)
    E = energy(v)
    gnorm = math.inf
    for _ in range(max_iter):
        g = _gradient(q, ell, p, v)
        scale = max(1.0, float(np.max(np.abs(v))))
        gnorm = float(np.sqrt(np.sum(g * g / q.dual))) / scale
        shift = 0.0
        while True:
            try:
                cb = cholesky_banded(_hessian_banded(q, ell, p, v, shift))
                break
            except LinAlgError:
                shift = max(2.0 * shift, 1e-8 * float(np.max(q.stiff)))
        step = -cho_solve_banded((cb, False), g)
        smax = float(np.max(np.abs(step)))
        if gnorm < tol and smax < tol * scale:
            break
        slope = float(np.dot(g, step))
        t = 1.0
        noise = 64 * np.finfo(float).eps * max(1.0, abs(E))  # energy rounding level
        while True:
            v_new = v + t * step
            E_new = energy(v_new)
            if E_new <= E + 1e-4 * t * slope + noise or t < 1e-12:
                break
            t *= 0.5
        v, E = v_new, E_new
        if not (math.isfinite(E) and float(np.max(np.abs(v))) < 1e150):
            # happens when ℓ exceeds the first eigenvalue with ω(π/2) = 0
            raise ConvergenceError("energy appears unbounded below: iterates diverged", gnorm)
    else:
        raise ConvergenceError(f"energy descent did not converge in {max_iter} iterations "
                               f"(gradient norm {gnorm:.3e})", gnorm)
    v = np.abs(v)
    h = q.h
    end = float((3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h))
    return RadialProfile(N, p, v, float(v[0]), end)


def residual_nd(profile: RadialProfile) -> tuple[float, float]:
    """(max interior finite-difference residual of the ODE, boundary residual)."""
    v, h = profile.values, profile.h
    ell = ell_coefficient(profile.N, profile.p)
    phi = profile.phi[1:-1]
    d2 = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / h ** 2
    d1 = (v[2:] - v[:-2]) / (2.0 * h)
    interior = d2 + (profile.N - 2) / np.tan(phi) * d1 + ell * v[1:-1]
    w_end = float(v[-1])
    bnd = profile.end_slope() + abs(w_end) ** (profile.p - 1.0) * w_end
    return float(np.max(np.abs(interior))), float(bnd)


# --------------------------------------------------------------------------
# self-similar check

def _sample_points(N: int) -> np.ndarray:
    """Fixed points in the upper half of the annulus 0.5 <= |x| <= 2."""
    pts = []
    for r in (0.7, 1.0, 1.4):
        for phi in (0.25, 0.6, 0.95, 1.3):
            for psi in (0.3, 1.9, 4.0):
                x = np.zeros(N)
                x[-1] = r * math.cos(phi)
                tang = r * math.sin(phi)
                if N == 2:
                    x[0] = tang if psi < 3.0 else -tang
                else:
                    x[0] = tang * math.cos(psi)
                    x[1] = tang * math.sin(psi)
                    if N > 3:  # spread the rest over the remaining axes
                        x[1:-1] = tang * math.sin(psi) / math.sqrt(N - 2)
                pts.append(x)
    return np.unique(np.array(pts), axis=0)


def verify_selfsimilar(profile, stencil_h: float) -> float:
    """Max |Δu| for u = |x|^{-1/(p-1)} ω(φ(x)) by the (2N+1)-point Cartesian stencil.

    ``profile`` is a RadialProfile (φ measured from the x_N axis) or a
    ``profile2d.Profile2D`` (N = 2, φ the polar angle in the upper half-plane).
    """
    from .profile2d import Profile2D

    if isinstance(profile, Profile2D):
        N, p = 2, profile.p
        zero = profile.is_zero

        def angle(x):
            return np.arctan2(x[..., 1], x[..., 0])
    else:
        N, p = profile.N, profile.p
        zero = not np.any(profile.values)

        def angle(x):
            rr = np.linalg.norm(x, axis=-1)
            return np.arccos(np.clip(x[..., -1] / rr, -1.0, 1.0))

    if zero:
        return 0.0
    beta = 1.0 / (p - 1.0)

    def u(x):
        return np.linalg.norm(x, axis=-1) ** (-beta) * profile(angle(x))

    offsets = np.vstack([np.zeros(N), stencil_h * np.eye(N), -stencil_h * np.eye(N)])
    worst = 0.0
    used = 0
    for x in _sample_points(N):
        stencil = x[None, :] + offsets
        rr = np.linalg.norm(stencil, axis=1)
        if rr.min() < 0.5 or rr.max() > 2.0 or stencil[:, -1].min() <= 0.0:
            continue
        vals = u(stencil)
        lap = (vals[1:].sum() - 2 * N * vals[0]) / stencil_h ** 2
        worst = max(worst, abs(float(lap)))
        used += 1
    if used == 0:
        raise ValueError(f"stencil_h = {stencil_h} leaves the annulus at every sample point")
    return worst


__all__ = ["ConvergenceError", "EnergyValue", "IntegrationError", "MultipleRootsError",
           "NoSolution", "RadialProfile", "hemisphere_area", "hemisphere_series",
           "integrate_shooting", "j_energy", "optimal_constant", "residual_nd",
           "shoot_solve", "shooting_function", "sphere_area", "variational_solve",
           "verify_selfsimilar"]
