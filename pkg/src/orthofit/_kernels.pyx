# cython: language_level=3
"""Compiled numerical kernels.

Same contracts and the same floating-point operation order as ``_pykernels``;
loops are plain left-to-right accumulations with the GIL released.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()


cdef inline double _dot(const double[::1] u, const double[::1] v) noexcept nogil:
    cdef Py_ssize_t i, n = u.shape[0]
    cdef double s = 0.0
    for i in range(n):
        s += u[i] * v[i]
    return s


cdef inline double _dot_cols(const double[::1, :] a, Py_ssize_t ja,
                             const double[::1, :] b, Py_ssize_t jb) noexcept nogil:
    cdef Py_ssize_t i, n = a.shape[0]
    cdef double s = 0.0
    for i in range(n):
        s += a[i, ja] * b[i, jb]
    return s


def dot(const double[::1] u, const double[::1] v):
    cdef double s
    with nogil:
        s = _dot(u, v)
    return s


def axpy(double alpha, const double[::1] x, const double[::1] y):
    cdef Py_ssize_t i, n = x.shape[0]
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = alpha * x[i] + y[i]
    return out


def mean(const double[::1] x):
    cdef Py_ssize_t i, n = x.shape[0]
    cdef double s = 0.0
    with nogil:
        for i in range(n):
            s += x[i]
    return s / n


def mgs(const double[::1, :] X, double drop_rtol, bint reorth):
    cdef Py_ssize_t n = X.shape[0], k = X.shape[1]
    cdef Py_ssize_t i, j, p, sweep, rank = 0
    cdef double c, rjj, threshold, nrm
    Q_arr = np.zeros((n, k), order="F")
    R_arr = np.zeros((k, k))
    kept_arr = np.zeros(k, dtype=np.intp)
    w_arr = np.empty(n)
    cdef double[::1, :] Q = Q_arr
    cdef double[:, ::1] R = R_arr
    cdef Py_ssize_t[::1] kept = kept_arr
    cdef double[::1] w = w_arr
    with nogil:
        for j in range(k):
            for i in range(n):
                w[i] = X[i, j]
            nrm = sqrt(_dot(w, w))
            threshold = drop_rtol * (nrm if nrm > 1.0 else 1.0)
            for sweep in range(2 if reorth else 1):
                for p in range(rank):
                    c = 0.0
                    for i in range(n):
                        c += Q[i, p] * w[i]
                    for i in range(n):
                        w[i] = (-c) * Q[i, p] + w[i]
                    R[kept[p], j] += c
            rjj = sqrt(_dot(w, w))
            R[j, j] = rjj
            if rjj <= threshold:
                continue
            for i in range(n):
                Q[i, rank] = w[i] / rjj
            kept[rank] = j
            rank += 1
    return Q_arr[:, :rank].copy(order="F"), R_arr, kept_arr[:rank].copy()


def project(const double[::1, :] Q, const double[::1] y):
    cdef Py_ssize_t n = Q.shape[0], r = Q.shape[1]
    cdef Py_ssize_t i, j
    cdef double c
    yhat_arr = np.zeros(n)
    coefs_arr = np.zeros(r)
    cdef double[::1] yhat = yhat_arr
    cdef double[::1] coefs = coefs_arr
    with nogil:
        for j in range(r):
            c = 0.0
            for i in range(n):
                c += y[i] * Q[i, j]
            coefs[j] = c
            for i in range(n):
                yhat[i] = c * Q[i, j] + yhat[i]
    return yhat_arr, coefs_arr


def matvec(const double[::1, :] X, const double[::1] beta):
    cdef Py_ssize_t n = X.shape[0], k = X.shape[1]
    cdef Py_ssize_t i, j
    out_arr = np.zeros(n)
    cdef double[::1] out = out_arr
    with nogil:
        for j in range(k):
            for i in range(n):
                out[i] = beta[j] * X[i, j] + out[i]
    return out_arr


def normal_equations(const double[::1, :] X, const double[::1] y, double pivot_rtol):
    cdef Py_ssize_t n = X.shape[0], k = X.shape[1]
    cdef Py_ssize_t i, j, c, r, p
    cdef double s, f, piv, best, tmp, scale = 0.0, tol
    cdef bint singular = False
    A_arr = np.empty((k, k))
    b_arr = np.empty(k)
    beta_arr = np.empty(k)
    cdef double[:, ::1] A = A_arr
    cdef double[::1] b = b_arr
    cdef double[::1] beta = beta_arr
    with nogil:
        for i in range(k):
            s = 0.0
            for r in range(n):
                s += X[r, i] * y[r]
            b[i] = s
            for j in range(i, k):
                s = _dot_cols(X, i, X, j)
                A[i, j] = s
                A[j, i] = s
        for i in range(k):
            if fabs(A[i, i]) > scale:
                scale = fabs(A[i, i])
        tol = pivot_rtol * scale
        for c in range(k):
            p = c
            best = fabs(A[c, c])
            for r in range(c + 1, k):
                if fabs(A[r, c]) > best:
                    best = fabs(A[r, c])
                    p = r
            if not (best > tol):
                singular = True
                break
            if p != c:
                for j in range(k):
                    tmp = A[c, j]
                    A[c, j] = A[p, j]
                    A[p, j] = tmp
                tmp = b[c]
                b[c] = b[p]
                b[p] = tmp
            piv = A[c, c]
            for r in range(c + 1, k):
                f = A[r, c] / piv
                for j in range(c, k):
                    A[r, j] = (-f) * A[c, j] + A[r, j]
                b[r] = (-f) * b[c] + b[r]
        if not singular:
            for i in range(k - 1, -1, -1):
                s = b[i]
                for j in range(i + 1, k):
                    s = s - A[i, j] * beta[j]
                beta[i] = s / A[i, i]
    if singular:
        return None
    return beta_arr
