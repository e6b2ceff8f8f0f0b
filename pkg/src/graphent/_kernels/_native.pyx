# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the decomposition-search inner loop.

Must stay semantically identical to ``pure.py``; the test suite compares the
two backends on random inputs.
"""

import numpy as np

from libc.math cimport cos, sin, sqrt

BACKEND = "native"

DEF MAX_M = 32
DEF DIM = 8


def param_count(int m, int r):
    """Length of the parameter vector for an m x r mixing isometry."""
    return m * (m - 1) + (r - 1)


cdef inline double _abs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef void _build_isometry(const double* params, double complex* v, int m, int r) nogil:
    # v is row-major m x r; Givens pairs in QR order, then r-1 column phases
    cdef int j, p, q, k
    cdef double theta, phi, c, s
    cdef double complex e, rp, rq
    for p in range(m):
        for j in range(r):
            v[p * r + j] = 1.0 if p == j else 0.0
    k = 0
    for p in range(m - 1):
        for q in range(p + 1, m):
            theta = params[k]
            phi = params[k + 1]
            k += 2
            c = cos(theta)
            s = sin(theta)
            e = cos(phi) + 1j * sin(phi)
            for j in range(r):
                rp = c * v[p * r + j] - s * e * v[q * r + j]
                rq = s * e.conjugate() * v[p * r + j] + c * v[q * r + j]
                v[p * r + j] = rp
                v[q * r + j] = rq
    for j in range(1, r):
        theta = params[k]
        k += 1
        e = cos(theta) + 1j * sin(theta)
        for p in range(m):
            v[p * r + j] = v[p * r + j] * e


cdef double _pair_c_sq(const double complex* x, const int* lo, const int* hi) nogil:
    cdef double complex x0[4]
    cdef double complex x1[4]
    cdef double complex y0[4]
    cdef double complex y1[4]
    cdef double complex t00 = 0, t01 = 0, t11 = 0, det
    cdef double frob, val
    cdef int k
    for k in range(4):
        x0[k] = x[lo[k]]
        x1[k] = x[hi[k]]
    # YY on the 2-qubit basis (00,01,10,11) maps v -> (-v3, v2, v1, -v0)
    y0[0] = -x0[3]; y0[1] = x0[2]; y0[2] = x0[1]; y0[3] = -x0[0]
    y1[0] = -x1[3]; y1[1] = x1[2]; y1[2] = x1[1]; y1[3] = -x1[0]
    for k in range(4):
        t00 += x0[k] * y0[k]
        t01 += x0[k] * y1[k]
        t11 += x1[k] * y1[k]
    frob = _abs2(t00) + 2.0 * _abs2(t01) + _abs2(t11)
    det = t00 * t11 - t01 * t01
    val = frob - 2.0 * sqrt(_abs2(det))
    return val if val > 0.0 else 0.0


cdef double _tau_raw(const double complex* x) nogil:
    cdef int c12_lo[4]
    cdef int c12_hi[4]
    cdef int c13_lo[4]
    cdef int c13_hi[4]
    cdef double t00 = 0, t11 = 0
    cdef double complex t01 = 0
    cdef double c1, tau
    cdef int k
    c12_lo[0] = 0; c12_lo[1] = 2; c12_lo[2] = 4; c12_lo[3] = 6
    c12_hi[0] = 1; c12_hi[1] = 3; c12_hi[2] = 5; c12_hi[3] = 7
    c13_lo[0] = 0; c13_lo[1] = 1; c13_lo[2] = 4; c13_lo[3] = 5
    c13_hi[0] = 2; c13_hi[1] = 3; c13_hi[2] = 6; c13_hi[3] = 7
    for k in range(4):
        t00 += _abs2(x[k])
        t11 += _abs2(x[k + 4])
        t01 += x[k] * x[k + 4].conjugate()
    c1 = 4.0 * (t00 * t11 - _abs2(t01))
    tau = c1 - _pair_c_sq(x, c12_lo, c12_hi) - _pair_c_sq(x, c13_lo, c13_hi)
    return tau if tau > 0.0 else 0.0


def three_tangle(amps):
    """Residual three-tangle of a normalized 3-qubit amplitude vector."""
    cdef const double complex[::1] a = np.ascontiguousarray(amps, dtype=complex)
    if a.shape[0] != DIM:
        raise ValueError("three_tangle expects 8 amplitudes")
    return _tau_raw(&a[0])


def mixing_isometry(params, int m, int r):
    """Isometry with orthonormal columns from the Givens/phase parameters."""
    cdef const double[::1] p = np.ascontiguousarray(params, dtype=np.float64)
    if p.shape[0] != m * (m - 1) + (r - 1):
        raise ValueError(
            f"expected {m * (m - 1) + (r - 1)} parameters, got ({p.shape[0]},)")
    if m > MAX_M or r > DIM:
        raise ValueError(f"isometry capacity is {MAX_M}x{DIM}")
    out = np.empty((m, r), dtype=complex)
    cdef double complex[:, ::1] vm = out
    _build_isometry(&p[0], &vm[0, 0], m, r)
    return out


def member_stats(params, wvecs, int m):
    """Weights and per-member (normalized) tangles of the parametrized decomposition."""
    cdef const double complex[:, ::1] wv = np.ascontiguousarray(wvecs, dtype=complex)
    cdef int r = wv.shape[0]
    if wv.shape[1] != DIM:
        raise ValueError("weighted eigenvectors must have 8 columns")
    if m > MAX_M or r > DIM or m < r:
        raise ValueError("member count out of range")
    cdef const double[::1] p = np.ascontiguousarray(params, dtype=np.float64)
    if p.shape[0] != m * (m - 1) + (r - 1):
        raise ValueError(
            f"expected {m * (m - 1) + (r - 1)} parameters, got ({p.shape[0]},)")
    weights = np.zeros(m, dtype=np.float64)
    tangles = np.zeros(m, dtype=np.float64)
    cdef double[::1] wout = weights
    cdef double[::1] tout = tangles
    cdef double complex v[MAX_M * DIM]
    cdef double complex x[DIM]
    cdef double w, raw
    cdef int i, j, k
    _build_isometry(&p[0], v, m, r)
    for i in range(m):
        for k in range(DIM):
            x[k] = 0
        for j in range(r):
            for k in range(DIM):
                x[k] = x[k] + v[i * r + j] * wv[j, k]
        w = 0
        for k in range(DIM):
            w += _abs2(x[k])
        wout[i] = w
        if w > 1e-14:
            tout[i] = _tau_raw(x) / (w * w)
    return weights, tangles


def objective_three_tangle(params, wvecs, int m):
    """Decomposition-averaged three-tangle: sum_i w_i * tangle(member_i)."""
    cdef const double complex[:, ::1] wv = np.ascontiguousarray(wvecs, dtype=complex)
    cdef int r = wv.shape[0]
    if wv.shape[1] != DIM:
        raise ValueError("weighted eigenvectors must have 8 columns")
    if m > MAX_M or r > DIM or m < r:
        raise ValueError("member count out of range")
    cdef const double[::1] p = np.ascontiguousarray(params, dtype=np.float64)
    if p.shape[0] != m * (m - 1) + (r - 1):
        raise ValueError(
            f"expected {m * (m - 1) + (r - 1)} parameters, got ({p.shape[0]},)")
    cdef double complex v[MAX_M * DIM]
    cdef double complex x[DIM]
    cdef double total = 0, w, raw
    cdef int i, j, k
    _build_isometry(&p[0], v, m, r)
    for i in range(m):
        for k in range(DIM):
            x[k] = 0
        for j in range(r):
            for k in range(DIM):
                x[k] = x[k] + v[i * r + j] * wv[j, k]
        w = 0
        for k in range(DIM):
            w += _abs2(x[k])
        if w > 1e-14:
            total += _tau_raw(x) / w
    return total
