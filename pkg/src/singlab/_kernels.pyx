# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Must stay numerically identical to _kernels_py."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, isfinite

cnp.import_array()


cdef inline void _rhs(double nm2, double ell, double phi, double w, double dw,
                      double *fw, double *fdw) noexcept nogil:
    fw[0] = dw
    fdw[0] = -nm2 * cos(phi) / sin(phi) * dw - ell * w


def rk4_hemisphere(double nm2, double ell, double phi0, double w0, double dw0,
                   double h, Py_ssize_t steps):
    """Classical RK4 for w'' + nm2 cot(phi) w' + ell w = 0 from phi0.

    Returns (w, dw, blowup_index); blowup_index is -1 when every step stayed finite.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.empty(steps + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dw = np.empty(steps + 1)
    cdef double y0 = w0, y1 = dw0, phi = phi0
    cdef double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b
    cdef double hh = 0.5 * h
    cdef Py_ssize_t i
    cdef Py_ssize_t bad = -1
    w[0] = y0
    dw[0] = y1
    with nogil:
        for i in range(steps):
            phi = phi0 + i * h
            _rhs(nm2, ell, phi, y0, y1, &k1a, &k1b)
            _rhs(nm2, ell, phi + hh, y0 + hh * k1a, y1 + hh * k1b, &k2a, &k2b)
            _rhs(nm2, ell, phi + hh, y0 + hh * k2a, y1 + hh * k2b, &k3a, &k3b)
            _rhs(nm2, ell, phi + h, y0 + h * k3a, y1 + h * k3b, &k4a, &k4b)
            y0 = y0 + h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
            y1 = y1 + h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
            w[i + 1] = y0
            dw[i + 1] = y1
            if not (isfinite(y0) and isfinite(y1)):
                bad = i + 1
                break
    return w, dw, bad
