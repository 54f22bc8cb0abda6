"""Dense vectors, column-major design matrices and elementary kernels.

Vectors are plain read-only ``float64`` numpy arrays; :func:`vector` is the
validating constructor. :class:`DesignMatrix` stores its data column-major.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from ._backend import kernels
from .errors import DimensionError, NonFiniteError

__all__ = [
    "DesignMatrix",
    "vector",
    "inner_product",
    "norm",
    "axpy",
    "column",
    "with_intercept",
]


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def vector(values: Iterable[float] | np.ndarray) -> np.ndarray:
    """Return a validated, read-only, contiguous float64 vector.

    Raises
    ------
    DimensionError
        If ``values`` is not one-dimensional or is empty.
    NonFiniteError
        If any element is NaN or infinite.
    """
    if isinstance(values, np.ndarray) and values.dtype == np.float64 and not values.flags.writeable:
        if values.ndim == 1 and values.flags.c_contiguous and values.size:
            return values
    try:
        arr = np.array(values, dtype=np.float64, copy=True)
    except ValueError as exc:
        raise DimensionError(f"cannot build a vector: {exc}") from None
    if arr.ndim != 1:
        raise DimensionError(f"expected a 1-D vector, got shape {arr.shape}")
    if arr.size == 0:
        raise DimensionError("vector must have at least one element")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("vector contains NaN or infinite values")
    return _freeze(np.ascontiguousarray(arr))


def _same_length(u: np.ndarray, v: np.ndarray) -> None:
    if u.shape[0] != v.shape[0]:
        raise DimensionError(f"length mismatch: {u.shape[0]} != {v.shape[0]}")


def inner_product(u, v) -> float:
    """Left-to-right sum of ``u[i] * v[i]``."""
    u, v = vector(u), vector(v)
    _same_length(u, v)
    return kernels.dot(u, v)


def norm(v) -> float:
    v = vector(v)
    return float(np.sqrt(kernels.dot(v, v)))


def axpy(alpha: float, x, y) -> np.ndarray:
    """Return ``alpha * x + y`` as a new vector."""
    x, y = vector(x), vector(y)
    _same_length(x, y)
    return _freeze(np.asarray(kernels.axpy(float(alpha), x, y)))


class DesignMatrix:
    """Immutable dense n x k real matrix stored column-major.

    Parameters
    ----------
    data : array_like, shape (n, k)
        Row-major nested sequence or 2-D array. Copied on construction.
    """

    __slots__ = ("_data",)

    def __init__(self, data) -> None:
        try:
            arr = np.array(data, dtype=np.float64, order="F", copy=True)
        except ValueError as exc:
            raise DimensionError(f"cannot build a design matrix: {exc}") from None
        if arr.ndim != 2:
            raise DimensionError(f"design matrix must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionError(f"design matrix must be at least 1 x 1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError("design matrix contains NaN or infinite values")
        self._data = _freeze(np.asfortranarray(arr))

    @classmethod
    def from_columns(cls, columns: Sequence) -> "DesignMatrix":
        cols = [vector(c) for c in columns]
        if not cols:
            raise DimensionError("at least one column is required")
        n = cols[0].shape[0]
        if any(c.shape[0] != n for c in cols):
            raise DimensionError("columns have different lengths")
        return cls(np.column_stack(cols))

    @property
    def n_rows(self) -> int:
        return self._data.shape[0]

    @property
    def n_cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape

    @property
    def array(self) -> np.ndarray:
        """Read-only Fortran-ordered view of the storage."""
        return self._data

    def column(self, j: int) -> np.ndarray:
        return column(self, j)

    def __array__(self, dtype=None, copy=None):
        return np.array(self._data, dtype=dtype, copy=True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DesignMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    __hash__ = None

    def __repr__(self) -> str:
        return f"DesignMatrix(n_rows={self.n_rows}, n_cols={self.n_cols})"


def column(m: DesignMatrix, j: int) -> np.ndarray:
    """Return a copy of column ``j``; the copy does not alias ``m``."""
    if not isinstance(j, (int, np.integer)) or isinstance(j, bool):
        raise TypeError("column index must be an integer")
    if not 0 <= j < m.n_cols:
        raise IndexError(f"column index {j} out of range for {m.n_cols} columns")
    return _freeze(np.array(m.array[:, j], copy=True))


def with_intercept(x_columns: Sequence = (), n: int | None = None) -> DesignMatrix:
    """Build a design matrix with a leading column of ones.

    ``n`` is only needed for the intercept-only design (no regressors).
    """
    cols = [vector(c) for c in x_columns]
    if not cols:
        if n is None or n < 1:
            raise DimensionError("intercept-only design needs an explicit n >= 1")
        return DesignMatrix(np.ones((n, 1)))
    rows = cols[0].shape[0]
    if any(c.shape[0] != rows for c in cols):
        raise DimensionError("regressor columns have different lengths")
    if n is not None and n != rows:
        raise DimensionError(f"n={n} does not match column length {rows}")
    return DesignMatrix(np.column_stack([np.ones(rows)] + cols))
