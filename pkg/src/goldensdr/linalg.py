"""Small dense linear-algebra kernel: products, orthonormalization, determinants.

Everything operates on float64 numpy arrays. Inputs are validated once at the
boundary (shape, finiteness) so downstream code can assume clean matrices.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "RankDeficientError",
    "as_matrix",
    "as_vector",
    "matmul",
    "orthonormal_basis",
    "det",
]

RANK_TOL = 1e-10
PIVOT_TOL = 1e-14


class RankDeficientError(ValueError):
    """Raised when a matrix expected to have full column rank does not.

    ``column`` is the index of the first column that collapsed under
    projection onto the span of its predecessors.
    """

    def __init__(self, column: int, norm: float, tol: float):
        self.column = column
        super().__init__(
            f"column {column} is numerically dependent on earlier columns "
            f"(projected norm {norm:.3e} <= tol {tol:.3e})"
        )


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and return ``a`` as a finite 2-D float64 array."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return m


def as_vector(a, name: str = "vector") -> np.ndarray:
    """Validate and return ``a`` as a finite 1-D float64 array."""
    v = np.asarray(a, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return v


def matmul(a, b) -> np.ndarray:
    """Matrix product with an explicit conformance check."""
    a = as_matrix(a, "left operand")
    b = as_matrix(b, "right operand")
    if a.shape[1] != b.shape[0]:
        raise ValueError(
            f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}"
        )
    return a @ b


def _fix_column_sign(q: np.ndarray) -> np.ndarray:
    """Flip a unit column so its leading non-negligible entry is positive."""
    nz = np.flatnonzero(np.abs(q) > RANK_TOL * max(np.abs(q).max(), 1.0))
    if nz.size and q[nz[0]] < 0:
        return -q
    return q


def orthonormal_basis(m) -> np.ndarray:
    """Orthonormalize the columns of a p x k matrix (k <= p).

    Modified Gram-Schmidt with one re-orthogonalization pass. Columns keep
    their input order and each column's leading nonzero entry is made
    positive, so the result is deterministic for a given input. Raises
    :class:`RankDeficientError` if a column is (numerically) in the span of
    the preceding ones, judged against ``RANK_TOL`` times the largest input
    column norm.
    """
    a = as_matrix(m)
    p, k = a.shape
    if k > p:
        raise ValueError(f"need at least as many rows as columns, got {p}x{k}")
    col_norms = np.linalg.norm(a, axis=0)
    tol = RANK_TOL * max(col_norms.max(), np.finfo(float).tiny)
    q = a.copy()
    for j in range(k):
        for _ in range(2):  # second pass mops up cancellation error
            for i in range(j):
                q[:, j] -= (q[:, i] @ q[:, j]) * q[:, i]
        norm = np.linalg.norm(q[:, j])
        if norm <= tol:
            raise RankDeficientError(j, norm, tol)
        q[:, j] /= norm
        q[:, j] = _fix_column_sign(q[:, j])
    return q


def det(m) -> float:
    """Determinant by LU factorization with partial pivoting.

    A pivot whose magnitude falls to ``PIVOT_TOL`` times the largest entry of
    the input is treated as an exact zero, so singular matrices return 0.0
    rather than rounding noise.
    """
    a = as_matrix(m)
    n, c = a.shape
    if n != c:
        raise ValueError(f"determinant needs a square matrix, got {n}x{c}")
    if n == 0:
        return 1.0
    lu = a.copy()
    zero_tol = PIVOT_TOL * max(np.abs(lu).max(), np.finfo(float).tiny)
    sign = 1.0
    for j in range(n):
        piv = j + int(np.argmax(np.abs(lu[j:, j])))
        if abs(lu[piv, j]) <= zero_tol:
            return 0.0
        if piv != j:
            lu[[j, piv]] = lu[[piv, j]]
            sign = -sign
        factors = lu[j + 1 :, j] / lu[j, j]
        lu[j + 1 :, j:] -= np.outer(factors, lu[j, j:])
    return float(sign * np.prod(np.diag(lu)))
