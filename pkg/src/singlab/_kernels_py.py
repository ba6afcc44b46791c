"""Pure-Python versions of the compiled kernels in ``_kernels.pyx``."""
from __future__ import annotations

import math

import numpy as np


def rk4_hemisphere(nm2: float, ell: float, phi0: float, w0: float, dw0: float,
                   h: float, steps: int):
    w = np.empty(steps + 1)
    dw = np.empty(steps + 1)
    y0, y1 = w0, dw0
    w[0], dw[0] = y0, y1
    hh = 0.5 * h
    cos, sin, isfinite = math.cos, math.sin, math.isfinite

    def rhs(phi, a, b):
        return b, -nm2 * cos(phi) / sin(phi) * b - ell * a

    for i in range(steps):
        phi = phi0 + i * h
        k1a, k1b = rhs(phi, y0, y1)
        k2a, k2b = rhs(phi + hh, y0 + hh * k1a, y1 + hh * k1b)
        k3a, k3b = rhs(phi + hh, y0 + hh * k2a, y1 + hh * k2b)
        k4a, k4b = rhs(phi + h, y0 + h * k3a, y1 + h * k3b)
        y0 = y0 + h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        y1 = y1 + h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        w[i + 1], dw[i + 1] = y0, y1
        if not (isfinite(y0) and isfinite(y1)):
            return w, dw, i + 1
    return w, dw, -1
