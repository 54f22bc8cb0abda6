"""Pure-numpy implementation of the numerical kernels.

Every reduction is accumulated strictly left to right (``np.cumsum``), and every
update is a single elementwise multiply followed by a single add, so the results
are bit-identical to the compiled ``_kernels`` module built without FMA
contraction.
"""

import numpy as np


def dot(u, v):
    n = u.shape[0]
    if n == 0:
        return 0.0
    return float(np.cumsum(u * v)[-1])


def axpy(alpha, x, y):
    return alpha * x + y


def mean(x):
    return float(np.cumsum(x)[-1]) / x.shape[0]


def mgs(X, drop_rtol, reorth):
    """Left-looking modified Gram-Schmidt with column dropping.

    Returns ``(Q, R, kept)``: ``Q`` holds the kept orthonormal vectors as
    columns, ``R`` is k x k upper triangular indexed by original column, and
    ``kept`` lists the original indices that produced a column of ``Q``.
    """
    n, k = X.shape
    Q = np.zeros((n, k), order="F")
    R = np.zeros((k, k))
    kept = []
    for j in range(k):
        w = X[:, j].copy()
        threshold = drop_rtol * max(1.0, np.sqrt(dot(w, w)))
        for sweep in range(2 if reorth else 1):
            for pos, i in enumerate(kept):
                q = Q[:, pos]
                c = dot(q, w)
                w = (-c) * q + w
                R[i, j] += c
        rjj = np.sqrt(dot(w, w))
        R[j, j] = rjj
        if rjj <= threshold:
            continue
        Q[:, len(kept)] = w / rjj
        kept.append(j)
    return Q[:, : len(kept)].copy(order="F"), R, np.array(kept, dtype=np.intp)


def project(Q, y):
    n, r = Q.shape
    yhat = np.zeros(n)
    coefs = np.zeros(r)
    for j in range(r):
        q = Q[:, j]
        c = dot(y, q)
        coefs[j] = c
        yhat = c * q + yhat
    return yhat, coefs


def matvec(X, beta):
    n, k = X.shape
    out = np.zeros(n)
    for j in range(k):
        out = beta[j] * X[:, j] + out
    return out


def normal_equations(X, y, pivot_rtol):
    """Solve (X'X) b = X'y by Gaussian elimination with partial pivoting.

    Returns ``None`` when a pivot falls below ``pivot_rtol`` times the largest
    diagonal entry of X'X.
    """
    n, k = X.shape
    A = np.empty((k, k))
    b = np.empty(k)
    for i in range(k):
        xi = X[:, i]
        b[i] = dot(xi, y)
        for j in range(i, k):
            A[i, j] = A[j, i] = dot(xi, X[:, j])
    scale = float(np.max(np.abs(np.diag(A)))) if k else 0.0
    tol = pivot_rtol * scale
    for c in range(k):
        p = c + int(np.argmax(np.abs(A[c:, c])))
        if not abs(A[p, c]) > tol:
            return None
        if p != c:
            A[[c, p]] = A[[p, c]]
            b[c], b[p] = b[p], b[c]
        piv = A[c, c]
        for r in range(c + 1, k):
            f = A[r, c] / piv
            A[r, c:] = (-f) * A[c, c:] + A[r, c:]
            b[r] = (-f) * b[c] + b[r]
    beta = np.empty(k)
    for i in range(k - 1, -1, -1):
        s = b[i]
        for j in range(i + 1, k):
            s = s - A[i, j] * beta[j]
        beta[i] = s / A[i, i]
    return beta
