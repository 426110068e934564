"""Subspace and prediction accuracy measures.

The headline metric is the vector correlation between two subspaces: with
column-orthonormal bases B (true, p x d) and B_hat (estimated, p x d_hat),

    r = sqrt( det( B_hat^T (B B^T) B_hat ) )

which equals the product of the cosines of the principal angles between the
spans. It lies in [0, 1], is invariant to the choice of basis within each
span, and is identically 0 whenever d_hat > d.
"""

from __future__ import annotations

import numpy as np

from .linalg import as_matrix, as_vector, det, orthonormal_basis

__all__ = ["SubspacePair", "vector_correlation", "mse", "aggregate"]

_NEG_CLAMP = 1e-10


class SubspacePair:
    """A true basis and an estimated basis over the same ambient space."""

    def __init__(self, beta_true, beta_hat):
        self.beta_true = as_matrix(beta_true, "beta_true")
        self.beta_hat = as_matrix(beta_hat, "beta_hat")
        if self.beta_true.shape[0] != self.beta_hat.shape[0]:
            raise ValueError(
                f"row counts differ: {self.beta_true.shape[0]} vs {self.beta_hat.shape[0]}"
            )


def vector_correlation(pair: SubspacePair) -> float:
    """Vector correlation between the spans of the two bases.

    Both inputs are orthonormalized first, so only the column spans matter.
    Tiny negative determinants from rounding are clamped to 0 before the
    square root; the result is clamped into [0, 1].
    """
    q_true = orthonormal_basis(pair.beta_true)
    q_hat = orthonormal_basis(pair.beta_hat)
    cross = q_true.T @ q_hat
    gram = cross.T @ cross  # = B_hat^T (B B^T) B_hat, d_hat x d_hat
    value = det(gram)
    if value < 0:
        if value < -_NEG_CLAMP:
            raise ValueError(f"determinant {value:.3e} below clamp tolerance")
        value = 0.0
    return min(float(np.sqrt(value)), 1.0)


def mse(pred, truth) -> float:
    """Mean squared difference between two equal-length vectors."""
    pred = as_vector(pred, "pred")
    truth = as_vector(truth, "truth")
    if pred.size != truth.size:
        raise ValueError(f"length mismatch: {pred.size} vs {truth.size}")
    if pred.size == 0:
        raise ValueError("empty vectors")
    diff = pred - truth
    return float(diff @ diff) / pred.size


def aggregate(values) -> tuple[float, float]:
    """Sample mean and standard error (n-1 denominator) of replications."""
    values = as_vector(values, "values")
    if values.size < 2:
        raise ValueError("need at least 2 values for a standard error")
    mean = float(values.mean())
    sd = float(values.std(ddof=1))
    return mean, sd / np.sqrt(values.size)
