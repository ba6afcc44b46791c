"""Boundary nonlinearities g and their growth analysis.

A nonlinearity is a continuous nondecreasing function with g(0) = 0 and
s g(s) >= 0. Four concrete forms are supported, each callable on scalars or
numpy arrays:

* :class:`Power`      g(s) = |s|^{p-1} s
* :class:`ExpOdd`     g(s) = sign(s) (exp(a|s|) - 1)
* :class:`Truncated`  g_l(r) = min{g(l), max{g(-l), g(r)}}
* :class:`Tabulated`  piecewise-linear interpolation of monotone samples

plus :class:`Zero` (g = 0) for linear problems.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import integrate


class Nonlinearity:
    """Common interface; subclasses implement ``__call__`` and ``derivative``."""

    def __call__(self, s):
        raise NotImplementedError

    def derivative(self, s):
        raise NotImplementedError

    @property
    def spec(self) -> str:
        raise NotImplementedError

    @property
    def bounded(self) -> bool:
        return False


@dataclass(frozen=True)
class Zero(Nonlinearity):
    def __call__(self, s):
        return np.zeros_like(np.asarray(s, dtype=float)) + 0.0

    def derivative(self, s):
        return np.zeros_like(np.asarray(s, dtype=float)) + 0.0

    @property
    def spec(self) -> str:
        return "zero"

    @property
    def bounded(self) -> bool:
        return True


@dataclass(frozen=True)
class Power(Nonlinearity):
    p: float

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError(f"power exponent must be positive, got {self.p}")

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        return np.sign(s) * np.abs(s) ** self.p

    def derivative(self, s):
        s = np.asarray(s, dtype=float)
        return self.p * np.abs(s) ** (self.p - 1.0)

    @property
    def spec(self) -> str:
        return f"pow:{self.p!r}"


@dataclass(frozen=True)
class ExpOdd(Nonlinearity):
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"exponential rate must be positive, got {self.a}")

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        return np.sign(s) * np.expm1(self.a * np.abs(s))

    def derivative(self, s):
        s = np.asarray(s, dtype=float)
        return self.a * np.exp(self.a * np.abs(s))

    @property
    def spec(self) -> str:
        return f"exp:{self.a!r}"


@dataclass(frozen=True)
class Truncated(Nonlinearity):
    base: Nonlinearity
    level: float

    def __post_init__(self):
        if not self.level > 0:
            raise ValueError(f"truncation level must be positive, got {self.level}")

    @property
    def upper(self) -> float:
        return float(self.base(self.level))

    @property
    def lower(self) -> float:
        return float(self.base(-self.level))

    def __call__(self, r):
        return np.minimum(self.upper, np.maximum(self.lower, self.base(r)))

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        inside = np.abs(r) < self.level
        return np.where(inside, self.base.derivative(np.where(inside, r, 0.0)), 0.0)

    @property
    def spec(self) -> str:
        return f"trunc:{self.base.spec}:{self.level!r}"

    @property
    def bounded(self) -> bool:
        return True


@dataclass(frozen=True, eq=False)
class Tabulated(Nonlinearity):
    """Monotone table of (s, g(s)); linear interpolation, linear end extrapolation."""

    s: np.ndarray
    g: np.ndarray
    source: str = field(default="<memory>")

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        g = np.asarray(self.g, dtype=float)
        if s.ndim != 1 or s.shape != g.shape or len(s) < 2:
            raise ValueError("table needs two equal-length 1-D columns with >= 2 rows")
        order = np.argsort(s)
        s, g = s[order], g[order]
        if np.any(np.diff(s) <= 0):
            raise ValueError("table abscissae must be distinct")
        if np.any(np.diff(g) < 0):
            raise ValueError("tabulated nonlinearity must be nondecreasing")
        if np.any(s * g < 0):
            raise ValueError("tabulated nonlinearity must satisfy s*g(s) >= 0")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "g", g)

    def _slopes(self):
        return ((self.g[1] - self.g[0]) / (self.s[1] - self.s[0]),
                (self.g[-1] - self.g[-2]) / (self.s[-1] - self.s[-2]))

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        lo, hi = self._slopes()
        out = np.interp(r, self.s, self.g)
        out = np.where(r < self.s[0], self.g[0] + lo * (r - self.s[0]), out)
        return np.where(r > self.s[-1], self.g[-1] + hi * (r - self.s[-1]), out)

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        slopes = np.diff(self.g) / np.diff(self.s)
        idx = np.clip(np.searchsorted(self.s, r, side="right") - 1, 0, len(slopes) - 1)
        return slopes[idx]

    @property
    def spec(self) -> str:
        return f"table:{self.source}"


def load_table(path: str | Path) -> Tabulated:
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
                continue  # header line
    arr = np.array(rows, dtype=float)
    return Tabulated(arr[:, 0], arr[:, 1], source=str(path))


def parse_nonlinearity(text: str) -> Nonlinearity:
    """Parse ``pow:<p>``, ``exp:<a>``, ``trunc:<inner>:<level>``, ``table:<csv>`` or ``zero``."""
    text = text.strip()
    kind, _, rest = text.partition(":")
    try:
        if kind == "zero" and not rest:
            return Zero()
        if kind == "pow":
            return Power(float(rest))
        if kind == "exp":
            return ExpOdd(float(rest))
        if kind == "trunc":
            inner, sep, level = rest.rpartition(":")
            if not sep:
                raise ValueError("missing truncation level")
            return Truncated(parse_nonlinearity(inner), float(level))
        if kind == "table":
            return load_table(rest)
    except ValueError as exc:
        raise ValueError(f"bad nonlinearity spec {text!r}: {exc}") from exc
    raise ValueError(f"unknown nonlinearity spec {text!r}")


def truncate(g: Nonlinearity, level: float) -> Truncated:
    return Truncated(g, float(level))


# --------------------------------------------------------------------------
# growth analysis

@dataclass(frozen=True)
class TailFit:
    model: str  # "power" or "exp"
    rate: float  # log-log exponent or semi-log rate
    residual: float


def _fit_tail(s: np.ndarray, y: np.ndarray) -> TailFit | None:
    """Least-squares tail model on the last quarter of the positive samples."""
    mask = (s > 0) & (y > 0)
    s, y = s[mask], y[mask]
    n = len(s)
    tail = max(int(math.ceil(0.25 * n)), 0)
    if tail < 8:
        return None
    s, ly = s[-tail:], np.log(y[-tail:])
    fits = []
    for model, x in (("power", np.log(s)), ("exp", s)):
        A = np.column_stack([x, np.ones_like(x)])
        coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
        res = float(np.sqrt(np.mean((A @ coef - ly) ** 2)))
        fits.append(TailFit(model, float(coef[0]), res))
    power, expo = fits
    # an exponential tail with non-positive rate carries no exponential growth
    if expo.residual < power.residual and expo.rate > 0:
        return expo
    return power


def _tabulated_tails(g: Tabulated):
    pos = _fit_tail(g.s[g.s > 0], g.g[g.s > 0])
    neg_s = -g.s[g.s < 0][::-1]
    neg_g = -g.g[g.s < 0][::-1]
    neg = _fit_tail(neg_s, neg_g)
    return pos, neg


def subcritical_check(g: Nonlinearity, N: int) -> tuple[bool | None, float]:
    """Decide whether the growth integral of g against s^{-(2N-3)/(N-2)} converges.

    Returns ``(decision, estimate)``. ``decision`` is ``None`` when a
    tabulated nonlinearity has too few tail samples to decide.
    """
    if N < 3:
        raise ValueError("the subcriticality integral is defined for N >= 3")
    q = (2.0 * N - 3.0) / (N - 2.0)
    # written this way so that p == (N-1)/(N-2) compares exactly in floating point
    p_crit = (N - 1.0) / (N - 2.0)
    if isinstance(g, Zero):
        return True, 0.0
    if isinstance(g, Power):
        if g.p < p_crit:
            return True, 2.0 / (p_crit - g.p)
        return False, math.inf
    if isinstance(g, ExpOdd):
        return False, math.inf
    if isinstance(g, Truncated):
        lvl = g.level
        head = 0.0
        if lvl > 1.0:
            head, _ = integrate.quad(lambda s: (g(s) + abs(g(-s))) * s ** (-q), 1.0, lvl,
                                     limit=200)
        plateau = g.upper + abs(g.lower)
        tail = plateau * max(lvl, 1.0) ** (1.0 - q) / (q - 1.0)
        return True, float(head + tail)
    if isinstance(g, Tabulated):
        pos, neg = _tabulated_tails(g)
        if pos is None or neg is None:
            return None, math.nan
        s_last = min(g.s[-1], -g.s[0])
        estimate = math.nan
        if s_last > 1.0:
            grid = np.linspace(1.0, s_last, 2001)
            estimate = float(np.trapezoid((g(grid) + np.abs(g(-grid))) * grid ** (-q), grid))
        ok = all(f.model == "power" and f.rate < p_crit for f in (pos, neg))
        return ok, (estimate if ok else math.inf)
    raise TypeError(f"unsupported nonlinearity {g!r}")


def exponential_orders(g: Nonlinearity) -> tuple[float, float]:
    """Return (a_plus, a_minus), the exponential orders of growth of g."""
    if isinstance(g, (Zero, Power, Truncated)):
        return 0.0, 0.0
    if isinstance(g, ExpOdd):
        return g.a, -g.a
    if isinstance(g, Tabulated):
        pos, neg = _tabulated_tails(g)
        a_plus = pos.rate if pos is not None and pos.model == "exp" else 0.0
        a_minus = -neg.rate if neg is not None and neg.model == "exp" else 0.0
        return a_plus, a_minus
    raise TypeError(f"unsupported nonlinearity {g!r}")


@dataclass(frozen=True)
class GrowthReport:
    subcritical: bool | None  # None when N = 2 or undecidable
    integral_estimate: float
    a_plus: float
    a_minus: float


def growth_report(g: Nonlinearity, N: int) -> GrowthReport:
    sub, est = subcritical_check(g, N) if N >= 3 else (None, math.nan)
    a_plus, a_minus = exponential_orders(g)
    return GrowthReport(sub, est, a_plus, a_minus)


def admissible_window(g: Nonlinearity) -> tuple[float, float]:
    a_plus, a_minus = exponential_orders(g)
    lo = math.pi / a_minus if a_minus < 0 else -math.inf
    hi = math.pi / a_plus if a_plus > 0 else math.inf
    return lo, hi


def dirac_admissible(g: Nonlinearity, weights: Sequence[float]) -> list[bool]:
    """Whether each planar Dirac weight lies in the window [π/a_-, π/a_+]."""
    lo, hi = admissible_window(g)
    return [bool(lo <= w <= hi) for w in weights]
