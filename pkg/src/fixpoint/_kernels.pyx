# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled distance and triangle-search kernels.

Metric codes: 0 euclidean, 1 max-coordinate, 2 squared euclidean,
3 discrete, 4 weighted l1.  Arrays hold tables as (rows, domain_size, dim);
a plain point set is the domain_size == 1 case.
"""

from libc.math cimport sqrt, fabs
import numpy as np

cdef double _base(const double[:, :, ::1] X, Py_ssize_t i,
                  const double[:, :, ::1] Y, Py_ssize_t j,
                  Py_ssize_t s, int code, const double[::1] w) nogil:
    cdef Py_ssize_t d = X.shape[2]
    cdef Py_ssize_t k
    cdef double acc = 0.0, diff
    if code == 0:
        if d == 1:
            return fabs(X[i, s, 0] - Y[j, s, 0])
        for k in range(d):
            diff = X[i, s, k] - Y[j, s, k]
            acc += diff * diff
        return sqrt(acc)
    elif code == 1:
        for k in range(d):
            diff = fabs(X[i, s, k] - Y[j, s, k])
            if diff > acc:
                acc = diff
        return acc
    elif code == 2:
        for k in range(d):
            diff = X[i, s, k] - Y[j, s, k]
            acc += diff * diff
        return acc
    elif code == 3:
        for k in range(d):
            if X[i, s, k] != Y[j, s, k]:
                return 1.0
        return 0.0
    else:
        for k in range(d):
            acc += w[k] * fabs(X[i, s, k] - Y[j, s, k])
        return acc


cdef double _sup(const double[:, :, ::1] X, Py_ssize_t i,
                 const double[:, :, ::1] Y, Py_ssize_t j,
                 int code, const double[::1] w) nogil:
    cdef Py_ssize_t s
    cdef double best = 0.0, v
    for s in range(X.shape[1]):
        v = _base(X, i, Y, j, s, code, w)
        if v > best:
            best = v
    return best


def pairwise_sup(const double[:, :, ::1] X, int code, const double[::1] w):
    cdef Py_ssize_t m = X.shape[0]
    cdef Py_ssize_t i, j
    out = np.zeros((m, m), dtype=np.float64)
    cdef double[:, ::1] D = out
    cdef double v
    with nogil:
        for i in range(m):
            for j in range(i + 1, m):
                v = _sup(X, i, X, j, code, w)
                D[i, j] = v
                D[j, i] = v
    return out


def rowwise_sup(const double[:, :, ::1] X, const double[:, :, ::1] Y,
                int code, const double[::1] w):
    cdef Py_ssize_t m = X.shape[0]
    cdef Py_ssize_t i
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] r = out
    with nogil:
        for i in range(m):
            r[i] = _sup(X, i, Y, i, code, w)
    return out


def first_triangle_violation(const double[:, ::1] D, double rtol):
    """First (a, b, c) in lexicographic order with D[a,c] > D[a,b] + D[b,c]."""
    cdef Py_ssize_t n = D.shape[0]
    cdef Py_ssize_t a, b, c
    cdef double lhs
    for a in range(n):
        for b in range(n):
            for c in range(n):
                lhs = D[a, c]
                if lhs - (D[a, b] + D[b, c]) > rtol * lhs:
                    return (a, b, c)
    return None
