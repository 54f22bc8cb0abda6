from fractions import Fraction

import numpy as np
import pytest

from orthofit import _pykernels, core, orthogonalize, regress, simulate


def exact_ols_fitted(X, y):
    """Exact rational least-squares fitted values (full column rank only).

    Solves the normal equations in Fractions, so the only rounding is the final
    conversion back to float.
    """
    X = [[Fraction(float(v)) for v in row] for row in np.asarray(X, dtype=float)]
    y = [Fraction(float(v)) for v in y]
    n, k = len(X), len(X[0])
    A = [[sum(X[r][i] * X[r][j] for r in range(n)) for j in range(k)] for i in range(k)]
    b = [sum(X[r][i] * y[r] for r in range(n)) for i in range(k)]
    for c in range(k):
        p = next(r for r in range(c, k) if A[r][c] != 0)
        A[c], A[p] = A[p], A[c]
        b[c], b[p] = b[p], b[c]
        for r in range(k):
            if r != c and A[r][c] != 0:
                f = A[r][c] / A[c][c]
                A[r] = [a - f * ac for a, ac in zip(A[r], A[c])]
                b[r] -= f * b[c]
    beta = [b[i] / A[i][i] for i in range(k)]
    fitted = [sum(X[r][j] * beta[j] for j in range(k)) for r in range(n)]
    return np.array([float(v) for v in fitted]), [float(v) for v in beta]


@pytest.fixture
def pure_backend(monkeypatch):
    """Route every module through the numpy fallback kernels."""
    for mod in (core, orthogonalize, regress, simulate):
        monkeypatch.setattr(mod, "kernels", _pykernels)
    yield _pykernels


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
