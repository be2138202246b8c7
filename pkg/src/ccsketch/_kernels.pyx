# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend: counter hash, skewed-stable transform, sketch
accumulation and per-trial minima.

Must stay semantically in lockstep with `ccsketch._kernels_py`; the integer
hash path is bit-identical, floats agree to within an ulp or two.
"""

from libc.math cimport sin, log, exp, M_PI
from libc.stdint cimport uint64_t

import numpy as np

BACKEND = "compiled"

cdef double TWO_NEG52 = 2.0 ** -52


cdef inline uint64_t _mix(uint64_t z) noexcept nogil:
    z ^= z >> 30
    z = z * <uint64_t>0xBF58476D1CE4E5B9UL
    z ^= z >> 27
    z = z * <uint64_t>0x94D049BB133111EBUL
    z ^= z >> 31
    return z


cdef inline void _pair(uint64_t seed, uint64_t index, uint64_t column,
                       double *v, double *w) noexcept nogil:
    cdef uint64_t k0 = _mix(seed ^ <uint64_t>0x9E3779B97F4A7C15UL)
    cdef uint64_t k1 = _mix(k0 ^ index)
    cdef uint64_t k2 = _mix(k1 ^ column)
    cdef uint64_t h1 = _mix(k2 ^ <uint64_t>0xD1B54A32D192ED03UL)
    cdef uint64_t h2 = _mix(k2 ^ <uint64_t>0x8CB92BA72F3D8DD7UL)
    v[0] = M_PI * ((<double>(h1 >> 12) + 0.5) * TWO_NEG52)
    w[0] = -log((<double>(h2 >> 12) + 0.5) * TWO_NEG52)


cdef inline double _weight(double gap, double alpha, double v, double w) noexcept nogil:
    return exp(log(sin(alpha * v)) - (1.0 / alpha) * log(sin(v))
               + (gap / alpha) * (log(sin(v * gap)) - log(w)))


def uniform_exp_pairs(seed, indices, column):
    """(v, w) arrays: v ~ uniform(0, pi) open, w ~ exp(1), both strictly
    inside their supports; pure function of (seed, index, column)."""
    cdef uint64_t s = seed
    cdef uint64_t col = column
    cdef uint64_t[::1] idx = np.ascontiguousarray(indices, dtype=np.uint64)
    cdef Py_ssize_t n = idx.shape[0]
    v_arr = np.empty(n)
    w_arr = np.empty(n)
    cdef double[::1] v = v_arr
    cdef double[::1] w = w_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            _pair(s, idx[i], col, &v[i], &w[i])
    return v_arr, w_arr


def stable_transform(gap, v, w):
    """Skewed-stable variate Z from an angle/exponential pair, evaluated in
    log domain: exp(log sin(a v) - (1/a) log sin v + (gap/a)(log sin(v gap)
    - log w)) with a = 1 - gap."""
    cdef double g = gap
    cdef double alpha = 1.0 - g
    cdef double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    cdef double[::1] ww = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t n = vv.shape[0]
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _weight(g, alpha, vv[i], ww[i])
    return out_arr


def weight_block(seed, gap, indices, k):
    """Dense (len(indices), k) block of projection weights."""
    cdef uint64_t s = seed
    cdef double g = gap
    cdef double alpha = 1.0 - g
    cdef uint64_t[::1] idx = np.ascontiguousarray(indices, dtype=np.uint64)
    cdef Py_ssize_t n = idx.shape[0]
    cdef Py_ssize_t kk = k
    out_arr = np.empty((n, kk))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double v, w
    with nogil:
        for i in range(n):
            for j in range(kk):
                _pair(s, idx[i], <uint64_t>j, &v, &w)
                out[i, j] = _weight(g, alpha, v, w)
    return out_arr


def accumulate(seed, gap, indices, increments, x):
    """x[j] += increment * weight(index, j) for every update, in place."""
    cdef uint64_t s = seed
    cdef double g = gap
    cdef double alpha = 1.0 - g
    cdef uint64_t[::1] idx = np.ascontiguousarray(indices, dtype=np.uint64)
    cdef double[::1] inc = np.ascontiguousarray(increments, dtype=np.float64)
    cdef double[::1] acc = x
    cdef Py_ssize_t n = idx.shape[0]
    cdef Py_ssize_t k = acc.shape[0]
    cdef Py_ssize_t i, j
    cdef double v, w
    with nogil:
        for i in range(n):
            for j in range(k):
                _pair(s, idx[i], <uint64_t>j, &v, &w)
                acc[j] += inc[i] * _weight(g, alpha, v, w)


def stable_minima(seed, gap, start, stop, k):
    """Per-trial minimum over k weights, trials indexed start..stop-1."""
    cdef uint64_t s = seed
    cdef double g = gap
    cdef double alpha = 1.0 - g
    cdef uint64_t t0 = start
    cdef uint64_t t1 = stop
    cdef Py_ssize_t n = <Py_ssize_t>(t1 - t0)
    cdef Py_ssize_t kk = k
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double v, w, z, best
    with nogil:
        for i in range(n):
            best = 0.0
            for j in range(kk):
                _pair(s, t0 + <uint64_t>i, <uint64_t>j, &v, &w)
                z = _weight(g, alpha, v, w)
                if j == 0 or z < best:
                    best = z
            out[i] = best
    return out_arr
