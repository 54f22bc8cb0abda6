"""Least-squares fits.

:func:`fit_projection` is the primary solver: it projects the response onto
an orthonormal basis of the column space and never forms ``(X'X)^-1``.
:func:`fit_simple_closed_form` and :func:`fit_normal_equations` are reference
routes kept for cross-checking and benchmarking only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._backend import kernels
from .core import DesignMatrix, _freeze, vector
from .errors import DegenerateRegressorError, DimensionError, SingularSystemError
from .orthogonalize import OrthonormalBasis, gram_schmidt

__all__ = [
    "Method",
    "FitResult",
    "SimpleRegressionData",
    "project",
    "fit_projection",
    "fit_simple_closed_form",
    "fit_normal_equations",
    "residual_diagnostics",
]

PIVOT_RTOL = 1e-12
SXX_RTOL = 1e-12
# r_squared for constant y: 1 when the fit is exact to this rss, else 0
_CONSTANT_Y_RSS = 1e-24


class Method(str, enum.Enum):
    PROJECTION = "projection"
    CLOSED_FORM_SIMPLE = "closed_form_simple"
    NORMAL_EQUATIONS = "normal_equations"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class FitResult:
    fitted: np.ndarray
    residuals: np.ndarray
    rss: float
    r_squared: float
    coefficients: Optional[np.ndarray]
    rank: int
    method: Method

    @property
    def n_obs(self) -> int:
        return self.fitted.shape[0]


@dataclass(frozen=True)
class SimpleRegressionData:
    """Paired observations of one regressor ``x`` and a response ``y``."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self) -> None:
        x, y = vector(self.x), vector(self.y)
        if x.shape[0] != y.shape[0]:
            raise DimensionError(f"x has {x.shape[0]} elements, y has {y.shape[0]}")
        if x.shape[0] < 2:
            raise DimensionError("simple regression needs at least 2 observations")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.shape[0]


def _finish(y, fitted, coefficients, rank, method) -> FitResult:
    fitted = _freeze(np.asarray(fitted, dtype=np.float64))
    residuals = _freeze(np.asarray(kernels.axpy(-1.0, fitted, y)))
    rss = kernels.dot(residuals, residuals)
    ybar = kernels.mean(y)
    centered = np.asarray(kernels.axpy(-ybar, np.ones_like(y), y))
    tss = kernels.dot(centered, centered)
    if tss > 0.0:
        r2 = 1.0 - rss / tss
    else:
        r2 = 1.0 if rss <= _CONSTANT_Y_RSS else 0.0
    if coefficients is not None:
        coefficients = _freeze(np.asarray(coefficients, dtype=np.float64))
    return FitResult(fitted, residuals, float(rss), float(r2), coefficients, int(rank), method)


def project(y, basis: OrthonormalBasis) -> np.ndarray:
    """Orthogonal projection of ``y``: sum over basis vectors of (y . q) q."""
    y = vector(y)
    if y.shape[0] != basis.n_rows:
        raise DimensionError(f"y has {y.shape[0]} elements, basis vectors have {basis.n_rows}")
    yhat, _ = kernels.project(basis.q, y)
    return _freeze(np.asarray(yhat))


def _check_xy(x, y) -> tuple[DesignMatrix, np.ndarray]:
    if not isinstance(x, DesignMatrix):
        x = DesignMatrix(x)
    y = vector(y)
    if x.n_rows != y.shape[0]:
        raise DimensionError(f"design has {x.n_rows} rows, y has {y.shape[0]} elements")
    return x, y


def fit_projection(x, y, *, reorthogonalize: bool = False) -> FitResult:
    """Fit by orthogonal projection of ``y`` onto the column space of ``x``.

    Rank-deficient designs are fitted on the span of the kept columns.
    Coefficients are reported only for full-rank designs with at most two
    columns; for wider designs only the fitted vector is produced.
    """
    x, y = _check_xy(x, y)
    basis = gram_schmidt(x, reorthogonalize=reorthogonalize)
    yhat, proj = kernels.project(basis.q, y)
    k = x.n_cols
    coefficients = None
    if k <= 2 and basis.rank == k:
        coefficients = _coefficients_from_basis(x, y, basis, proj)
    return _finish(y, yhat, coefficients, basis.rank, Method.PROJECTION)


def _coefficients_from_basis(x: DesignMatrix, y, basis: OrthonormalBasis, proj) -> np.ndarray:
    r = basis.coeffs
    if x.n_cols == 1:
        return np.array([proj[0] / r[0, 0]])
    slope = proj[1] / r[1, 1]
    ones = x.array[:, 0]
    if np.all(ones == 1.0):
        # intercept design: beta0 = ybar - beta1 * xbar
        intercept = kernels.mean(y) - slope * kernels.mean(np.ascontiguousarray(x.array[:, 1]))
    else:
        intercept = (proj[0] - r[0, 1] * slope) / r[0, 0]
    return np.array([intercept, slope])


def fit_simple_closed_form(data: SimpleRegressionData) -> FitResult:
    """Reference fit of ``y = b0 + b1 x`` from centered sums.

    Raises
    ------
    DegenerateRegressorError
        If the centered sum of squares of ``x`` is below
        ``1e-12 * max(1, ||x||^2)``.
    """
    x, y = data.x, data.y
    ones = np.ones_like(x)
    xbar = kernels.mean(x)
    ybar = kernels.mean(y)
    dx = np.asarray(kernels.axpy(-xbar, ones, x))
    dy = np.asarray(kernels.axpy(-ybar, ones, y))
    sxx = kernels.dot(dx, dx)
    if sxx < SXX_RTOL * max(1.0, kernels.dot(x, x)):
        raise DegenerateRegressorError("regressor is constant; slope is undefined")
    slope = kernels.dot(dx, dy) / sxx
    intercept = ybar - slope * xbar
    fitted = kernels.axpy(slope, x, intercept * ones)
    return _finish(y, fitted, [intercept, slope], 2, Method.CLOSED_FORM_SIMPLE)


def fit_normal_equations(x, y) -> FitResult:
    """Reference fit via ``(X'X) b = X'y`` and Gaussian elimination.

    Not the primary solver; it exists to cross-check :func:`fit_projection`.

    Raises
    ------
    SingularSystemError
        If a pivot falls below ``1e-12`` times the largest diagonal entry of
        ``X'X``, or if there are fewer rows than columns.
    """
    x, y = _check_xy(x, y)
    if x.n_rows < x.n_cols:
        raise SingularSystemError(f"{x.n_rows} observations cannot identify {x.n_cols} coefficients")
    beta = kernels.normal_equations(x.array, y, PIVOT_RTOL)
    if beta is None:
        raise SingularSystemError("X'X is singular to working precision")
    fitted = kernels.matvec(x.array, beta)
    return _finish(y, fitted, beta, x.n_cols, Method.NORMAL_EQUATIONS)


def residual_diagnostics(fit: FitResult, x) -> float:
    """max_j |r . X_j| / (1 + ||r|| ||X_j||); near zero for a correct projection."""
    if not isinstance(x, DesignMatrix):
        x = DesignMatrix(x)
    r = fit.residuals
    if r.shape[0] != x.n_rows:
        raise DimensionError(f"fit has {r.shape[0]} residuals, design has {x.n_rows} rows")
    rnorm = np.sqrt(kernels.dot(r, r))
    worst = 0.0
    for j in range(x.n_cols):
        col = np.ascontiguousarray(x.array[:, j])
        val = abs(kernels.dot(r, col)) / (1.0 + rnorm * np.sqrt(kernels.dot(col, col)))
        worst = max(worst, val)
    return float(worst)
