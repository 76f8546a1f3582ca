# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled walk kernels; bit-identical to the numpy lane in _kernels.

Same contracts as the pure versions: uniforms in, int64 cumulative levels
out, one fused pass per trajectory.
"""

import numpy as np


def paper_levels(const double[::1] gate, const double[::1] val, double p, double rho):
    cdef Py_ssize_t n = gate.shape[0]
    out = np.empty(n, dtype=np.int64)
    cdef long long[::1] o = out
    cdef Py_ssize_t i
    cdef long long level = 0
    cdef int xi = 0
    with nogil:
        xi = 1 if val[0] < p else 0
        level = 2 * xi - 1
        o[0] = level
        for i in range(1, n):
            if gate[i] >= rho:
                xi = 1 if val[i] < p else 0
            level += 2 * xi - 1
            o[i] = level
    return out


def matched_levels(const double[::1] u, double p, double sigma1):
    cdef Py_ssize_t n = u.shape[0]
    out = np.empty(n, dtype=np.int64)
    cdef long long[::1] o = out
    cdef double t1 = p + (1.0 - p) * sigma1
    cdef double t0 = p * (1.0 - sigma1)
    cdef Py_ssize_t i
    cdef long long level = 0
    cdef int xi = 0
    with nogil:
        xi = 1 if u[0] < p else 0
        level = 2 * xi - 1
        o[0] = level
        for i in range(1, n):
            if u[i] < t0:
                xi = 1
            elif u[i] >= t1:
                xi = 0
            level += 2 * xi - 1
            o[i] = level
    return out


def enriquez_levels(const double[::1] u, double rho):
    cdef Py_ssize_t n = u.shape[0]
    out = np.empty(n, dtype=np.int64)
    cdef long long[::1] o = out
    cdef Py_ssize_t i
    cdef long long level = 0
    cdef int step = 0
    with nogil:
        step = 1 if u[0] < 0.5 else -1
        level = step
        o[0] = level
        for i in range(1, n):
            if u[i] >= rho:
                step = -step
            level += step
            o[i] = level
    return out
