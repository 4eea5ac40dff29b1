# cython: language_level=3
"""Compiled hot loops: batched circuit simulation and cyclic Jacobi sweeps.

Every gate used by the distance circuits (H, RY, CSWAP) is real, so the
batched simulators keep amplitudes as doubles. Results match the complex
simulator in :mod:`qcluster.qsim` to rounding.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, sqrt, fabs
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef double INV_SQRT2 = 0.70710678118654752440


cdef inline void _ry(double* s, int dim, int q, double theta) noexcept nogil:
    cdef double c = cos(0.5 * theta)
    cdef double sn = sin(0.5 * theta)
    cdef int bit = 1 << q
    cdef int i
    cdef double a0, a1
    for i in range(dim):
        if i & bit:
            continue
        a0 = s[i]
        a1 = s[i | bit]
        s[i] = c * a0 - sn * a1
        s[i | bit] = sn * a0 + c * a1


cdef inline void _h(double* s, int dim, int q) noexcept nogil:
    cdef int bit = 1 << q
    cdef int i
    cdef double a0, a1
    for i in range(dim):
        if i & bit:
            continue
        a0 = s[i]
        a1 = s[i | bit]
        s[i] = INV_SQRT2 * (a0 + a1)
        s[i | bit] = INV_SQRT2 * (a0 - a1)


cdef inline void _cswap(double* s, int dim, int ctl, int a, int b) noexcept nogil:
    cdef int i, j
    cdef double tmp
    cdef int flip = (1 << a) | (1 << b)
    for i in range(dim):
        # visit each swapped pair once: control set, bit a = 1, bit b = 0
        if ((i >> ctl) & 1) and ((i >> a) & 1) and not ((i >> b) & 1):
            j = i ^ flip
            tmp = s[i]
            s[i] = s[j]
            s[j] = tmp


def swap_test_p0(double[:, ::1] X, double[:, ::1] C):
    """Ancilla zero-probability of the swap test for every (row of X, row of C)."""
    cdef Py_ssize_t m = X.shape[0], k = C.shape[0]
    cdef int n = <int>X.shape[1]
    cdef int nq = 2 * n + 1
    cdef int dim = 1 << nq
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((m, k), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef double* s = <double*>malloc(dim * sizeof(double))
    cdef Py_ssize_t i, j
    cdef int q, t
    cdef double p0
    if s == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(m):
                for j in range(k):
                    for t in range(dim):
                        s[t] = 0.0
                    s[0] = 1.0
                    _h(s, dim, 0)
                    for q in range(n):
                        _ry(s, dim, 1 + q, 2.0 * X[i, q])
                        _ry(s, dim, 1 + n + q, 2.0 * C[j, q])
                    for q in range(n):
                        _cswap(s, dim, 0, 1 + q, 1 + n + q)
                    _h(s, dim, 0)
                    p0 = 0.0
                    for t in range(0, dim, 2):
                        p0 += s[t] * s[t]
                    ov[i, j] = p0
    finally:
        free(s)
    return out


def kernel_p0(double[:, ::1] X, double[:, ::1] C, bint first_qubit=False):
    """Return-to-zero probability of ``U(c)^dagger U(x)|0>`` for every pair."""
    cdef Py_ssize_t m = X.shape[0], k = C.shape[0]
    cdef int n = <int>X.shape[1]
    cdef int dim = 1 << n
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((m, k), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef double* s = <double*>malloc(dim * sizeof(double))
    cdef Py_ssize_t i, j
    cdef int q, t
    cdef double p
    if s == NULL:
        raise MemoryError()
    try:
        with nogil:
            for i in range(m):
                for j in range(k):
                    for t in range(dim):
                        s[t] = 0.0
                    s[0] = 1.0
                    for q in range(n):
                        _ry(s, dim, q, 2.0 * X[i, q])
                        _ry(s, dim, q, -2.0 * C[j, q])
                    if first_qubit:
                        p = 0.0
                        for t in range(0, dim, 2):
                            p += s[t] * s[t]
                    else:
                        p = s[0] * s[0]
                    ov[i, j] = p
    finally:
        free(s)
    return out


def jacobi_eigh(double[:, ::1] A, double tol=1e-15, int max_sweeps=100):
    """Cyclic (row-by-row) Jacobi diagonalization.

    Returns ``(diagonal, V, sweeps)`` with ``A ~= V diag V^T``; eigenvalues
    are unsorted. ``A`` is copied, never modified.
    """
    cdef Py_ssize_t n = A.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a_arr = np.array(A, dtype=np.float64, copy=True)
    # eigenvectors are accumulated as rows so rotations stay contiguous
    cdef cnp.ndarray[cnp.float64_t, ndim=2] vt_arr = np.eye(n, dtype=np.float64)
    cdef double[:, ::1] a = a_arr
    cdef double[:, ::1] vt = vt_arr
    cdef Py_ssize_t p, q, r
    cdef int sweep = 0
    cdef double off, total, apq, theta, t, c, s, x, y, g, thresh
    with nogil:
        total = 0.0
        for p in range(n):
            for q in range(n):
                total += a[p, q] * a[p, q]
        while sweep < max_sweeps:
            off = 0.0
            for p in range(n):
                for q in range(p + 1, n):
                    off += a[p, q] * a[p, q]
            if 2.0 * off <= tol * tol * total:
                break
            sweep += 1
            # early sweeps skip small entries; later ones drop entries
            # that no longer register against both diagonal elements
            thresh = 0.2 * sqrt(off) / (n * n) if sweep <= 3 else 0.0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    g = 100.0 * fabs(apq)
                    if sweep > 4 and fabs(a[p, p]) + g == fabs(a[p, p]) and fabs(a[q, q]) + g == fabs(a[q, q]):
                        a[p, q] = 0.0
                        a[q, p] = 0.0
                        continue
                    if apq == 0.0 or fabs(apq) <= thresh:
                        continue
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                    t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    for r in range(n):
                        x = a[r, p]
                        y = a[r, q]
                        a[r, p] = c * x - s * y
                        a[r, q] = s * x + c * y
                    for r in range(n):
                        x = a[p, r]
                        y = a[q, r]
                        a[p, r] = c * x - s * y
                        a[q, r] = s * x + c * y
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for r in range(n):
                        x = vt[p, r]
                        y = vt[q, r]
                        vt[p, r] = c * x - s * y
                        vt[q, r] = s * x + c * y
    return np.diag(a_arr).copy(), np.ascontiguousarray(vt_arr.T), sweep
