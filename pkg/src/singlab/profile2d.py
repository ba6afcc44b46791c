"""Closed-form separable solutions in the half-plane.

For N = 2 the profile equation on (0, π) is ω'' + ω/(p-1)² = 0 with the
nonlinear boundary conditions

    (-ω' + |ω|^{p-1} ω)(0) = 0,   (ω' + |ω|^{p-1} ω)(π) = 0,

so ω(φ) = a cos(φ/(p-1)) + b sin(φ/(p-1)). The left condition forces
b = (p-1)|a|^{p-1} a, and the right one reduces to a scalar equation Φ(X) = 0
in X = (p-1) a^{p-1}.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

RESONANCE_TOL = 1e-9
SCAN_X_MAX = 1e3
SCAN_X_LIMIT = 1e9
BISECTION_WIDTH = 1e-14
BISECTION_MAX_ITER = 200


class RootBracketError(RuntimeError):
    pass


@dataclass(frozen=True)
class Profile2D:
    a: float
    b: float
    p: float

    @property
    def freq(self) -> float:
        return 1.0 / (self.p - 1.0)

    @property
    def is_zero(self) -> bool:
        return self.a == 0.0 and self.b == 0.0

    def __neg__(self) -> "Profile2D":
        return Profile2D(-self.a, -self.b, self.p)

    def __call__(self, phi):
        """Vectorised evaluation without the domain check."""
        t = np.asarray(phi, dtype=float) * self.freq
        return self.a * np.cos(t) + self.b * np.sin(t)

    def derivative(self, phi, order: int = 1):
        t = np.asarray(phi, dtype=float) * self.freq
        k = self.freq
        if order == 1:
            return k * (-self.a * np.sin(t) + self.b * np.cos(t))
        if order == 2:
            return -k * k * (self.a * np.cos(t) + self.b * np.sin(t))
        raise ValueError("order must be 1 or 2")


def is_resonant(p: float) -> bool:
    """True when 1/(p-1) is a positive integer (to RESONANCE_TOL)."""
    q = 1.0 / (p - 1.0)
    n = round(q)
    return n >= 1 and abs(q - n) <= RESONANCE_TOL


def phi_function(X, p: float):
    """Φ(X) = -sin θ + X cos θ + X (cos θ + X sin θ)|cos θ + X sin θ|^{p-1}, θ = π/(p-1)."""
    if not p > 1:
        raise ValueError(f"p must be > 1, got {p}")
    X = np.asarray(X, dtype=float)
    th = math.pi / (p - 1.0)
    s, c = math.sin(th), math.cos(th)
    y = c + X * s
    out = -s + X * c + X * y * np.abs(y) ** (p - 1.0)
    return out if out.ndim else float(out)


def _bisect(f, lo: float, hi: float, flo: float) -> float:
    for _ in range(BISECTION_MAX_ITER):
        if hi - lo <= BISECTION_WIDTH * max(1.0, abs(lo)):
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def phi_root(p: float, x_max: float = SCAN_X_MAX) -> float:
    """Unique positive root of Φ, bracketed by a scan of (0, x_max] that grows on failure."""
    f = lambda x: phi_function(x, p)  # noqa: E731
    f0 = f(0.0)
    if f0 == 0.0:
        raise RootBracketError("Φ(0) = 0: resonant exponent has no positive root")
    while x_max <= SCAN_X_LIMIT:
        xs = np.concatenate([np.geomspace(1e-10, x_max, 800)])
        vals = phi_function(xs, p)
        change = np.nonzero(np.sign(vals) != np.sign(f0))[0]
        if change.size:
            i = change[0]
            lo = xs[i - 1] if i > 0 else 0.0
            flo = vals[i - 1] if i > 0 else f0
            return _bisect(f, lo, xs[i], flo)
        x_max *= 10.0
    raise RootBracketError(f"no sign change of Φ on (0, {x_max / 10:.3g}] for p = {p}")


def solve_profile2d(p: float) -> list[Profile2D]:
    """All separable profiles: [0] when 1/(p-1) is an integer, else [0, ω_s, -ω_s]."""
    if not p > 1:
        raise ValueError(f"p must be > 1, got {p}")
    zero = Profile2D(0.0, 0.0, p)
    if is_resonant(p):
        return [zero]
    x0 = phi_root(p)
    a = (x0 / (p - 1.0)) ** (1.0 / (p - 1.0))
    b = (p - 1.0) * a ** p
    ws = Profile2D(a, b, p)
    return [zero, ws, -ws]


def positive_profile(p: float) -> Profile2D:
    """ω_s, the member with a > 0; raises for resonant exponents."""
    sols = solve_profile2d(p)
    if len(sols) == 1:
        raise ValueError(f"only the zero profile exists for p = {p}")
    return sols[1]


def eval_profile2d(profile: Profile2D, phi):
    phi_arr = np.asarray(phi, dtype=float)
    if np.any((phi_arr < 0) | (phi_arr > math.pi)):
        raise ValueError("φ must lie in [0, π]")
    out = profile(phi_arr)
    return out if out.ndim else float(out)


def boundary_residuals(profile: Profile2D) -> tuple[float, float]:
    p = profile.p
    w0, wpi = float(profile(0.0)), float(profile(math.pi))
    d0, dpi = float(profile.derivative(0.0)), float(profile.derivative(math.pi))
    r0 = -d0 + abs(w0) ** (p - 1) * w0
    rpi = dpi + abs(wpi) ** (p - 1) * wpi
    return r0, rpi


class SignPattern(str, enum.Enum):
    CONSTANT_SIGN = "CONSTANT_SIGN"
    SIGN_CHANGING = "SIGN_CHANGING"


@dataclass(frozen=True)
class SignReport:
    pattern: SignPattern
    crossings: tuple


def sign_analysis(profile: Profile2D, samples: int = 1000) -> SignReport:
    """Sign changes of ω on a uniform grid of [0, π], refined by bisection."""
    if profile.is_zero:
        raise ValueError("sign analysis of the zero profile is meaningless")
    if samples < 100:
        raise ValueError("use at least 100 samples")
    phi = np.linspace(0.0, math.pi, samples + 1)
    vals = profile(phi)
    sgn = np.sign(vals)
    crossings = []
    for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
        crossings.append(_bisect(lambda x: float(profile(x)), phi[i], phi[i + 1], vals[i]))
    # interior zeros landing exactly on a node
    for i in np.nonzero(sgn[1:-1] == 0)[0] + 1:
        if sgn[i - 1] * sgn[i + 1] < 0:
            crossings.append(float(phi[i]))
    crossings.sort()
    pattern = SignPattern.SIGN_CHANGING if crossings else SignPattern.CONSTANT_SIGN
    return SignReport(pattern, tuple(crossings))
