"""Gram-Schmidt orthonormalization of a design matrix's column space."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .core import DesignMatrix, _freeze, vector

__all__ = ["DROP_RTOL", "OrthonormalBasis", "gram_schmidt", "centered_second_vector"]

#: A column drops when its residual norm is <= DROP_RTOL * max(1, norm(column)).
DROP_RTOL = 1e-12


@dataclass(frozen=True)
class OrthonormalBasis:
    """Orthonormal basis of the column space of a design matrix.

    Attributes
    ----------
    q : ndarray, shape (n, rank)
        Orthonormal vectors as Fortran-ordered columns, in the order of ``kept``.
    coeffs : ndarray, shape (k, k)
        Upper triangular, indexed by original column. ``coeffs[i, j]`` is the
        component of column ``j`` removed along the vector built from column
        ``i``; ``coeffs[j, j]`` is the residual norm before normalization
        (recorded for dropped columns too).
    kept, dropped : tuple of int
        Original column indices, ascending.
    """

    q: np.ndarray
    coeffs: np.ndarray
    kept: tuple[int, ...]
    dropped: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.kept)

    @property
    def n_rows(self) -> int:
        return self.q.shape[0]

    @property
    def q_columns(self) -> list[np.ndarray]:
        return [_freeze(self.q[:, p].copy()) for p in range(self.rank)]

    def vector_for(self, j: int) -> np.ndarray:
        """Basis vector produced by original column ``j`` (must be kept)."""
        try:
            pos = self.kept.index(j)
        except ValueError:
            raise KeyError(f"column {j} was dropped or does not exist") from None
        return _freeze(self.q[:, pos].copy())

    def orthonormality_error(self) -> float:
        """max over pairs of |q_a . q_b - delta_ab|."""
        r = self.rank
        worst = 0.0
        for a in range(r):
            qa = self.q[:, a]
            for b in range(a, r):
                err = abs(kernels.dot(qa, self.q[:, b]) - (1.0 if a == b else 0.0))
                worst = max(worst, err)
        return worst

    def reconstruct(self, j: int) -> np.ndarray:
        """Sum over kept i <= j of coeffs[i, j] * q_i."""
        out = np.zeros(self.n_rows)
        for pos, i in enumerate(self.kept):
            if i > j:
                break
            out = self.coeffs[i, j] * self.q[:, pos] + out
        return out


def gram_schmidt(x: DesignMatrix, *, reorthogonalize: bool = False,
                 drop_rtol: float = DROP_RTOL) -> OrthonormalBasis:
    """Orthonormalize the columns of ``x`` by modified Gram-Schmidt.

    Columns are processed in their natural order without pivoting. Each
    projection is removed from the working vector before the next coefficient
    is computed. A column whose residual norm falls to or below
    ``drop_rtol * max(1, norm(column))`` is recorded as dropped and contributes
    no basis vector. With ``reorthogonalize=True`` a second sweep is applied to
    each column against the vectors already built.
    """
    if not isinstance(x, DesignMatrix):
        x = DesignMatrix(x)
    q, coeffs, kept = kernels.mgs(x.array, float(drop_rtol), bool(reorthogonalize))
    kept_t = tuple(int(j) for j in kept)
    dropped_t = tuple(j for j in range(x.n_cols) if j not in set(kept_t))
    return OrthonormalBasis(_freeze(np.asfortranarray(q)), _freeze(coeffs), kept_t, dropped_t)


def centered_second_vector(x_col) -> np.ndarray:
    """Return ``x - mean(x)``, the second orthogonal vector when the first is all ones."""
    x = vector(x_col)
    xbar = kernels.mean(x)
    return _freeze(np.asarray(kernels.axpy(-xbar, np.ones_like(x), x)))
