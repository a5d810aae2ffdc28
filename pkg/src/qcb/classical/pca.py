"""Principal component analysis via covariance eigendecomposition."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import UsageError

_RANK_RTOL = 1e-12


@dataclass(frozen=True)
class PcaTransform:
    """Fitted projection: orthonormal component rows and their eigenvalues.

    ``explained_variance_ratio`` is relative to the total variance of the
    training data, so it sums to 1 only when every component is retained.
    ``meets_variance_target`` records whether the retained components explain
    at least ``variance_target`` of the total variance (a warning flag, not
    an error).  ``rank_deficient`` is set when the covariance rank was lower
    than the requested component count.
    """

    components: np.ndarray
    eigenvalues: np.ndarray
    mean: np.ndarray
    explained_variance_ratio: np.ndarray
    variance_target: float
    meets_variance_target: bool
    rank_deficient: bool

    @property
    def n_components(self) -> int:
        return self.components.shape[0]


def fit_pca(X: np.ndarray, n_components: int, variance_target: float = 0.95) -> PcaTransform:
    """Center ``X``, eigendecompose its covariance, keep the top components.

    Components are sign-fixed so the entry of largest magnitude in each row
    is positive, keeping the decomposition deterministic.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise UsageError("X must be 2-D with at least 2 samples")
    n, d = X.shape
    if not 1 <= n_components <= min(n, d):
        raise UsageError(
            f"n_components must be in 1..{min(n, d)}, got {n_components}"
        )
    mean = X.mean(axis=0)
    centered = X - mean
    cov = centered.T @ centered / (n - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.maximum(eigvals[order], 0.0)
    eigvecs = eigvecs[:, order]

    total = float(eigvals.sum())
    rank = int(np.sum(eigvals > (eigvals[0] * _RANK_RTOL if eigvals[0] > 0 else 0.0)))
    rank = max(rank, 1)
    kept = min(n_components, rank)

    components = eigvecs[:, :kept].T.copy()
    for row in components:
        pivot = np.argmax(np.abs(row))
        if row[pivot] < 0:
            row *= -1.0

    ratio = eigvals[:kept] / total if total > 0 else np.zeros(kept)
    explained = float(ratio.sum())
    for arr in (components, eigvals, mean, ratio):
        arr.setflags(write=False)
    return PcaTransform(
        components=components,
        eigenvalues=eigvals[:kept],
        mean=mean,
        explained_variance_ratio=ratio,
        variance_target=variance_target,
        meets_variance_target=explained + 1e-12 >= variance_target,
        rank_deficient=kept < n_components,
    )


def pca_transform(transform: PcaTransform, X: np.ndarray) -> np.ndarray:
    """Project rows of ``X`` onto the fitted components."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != transform.mean.shape[0]:
        raise UsageError(
            f"expected {transform.mean.shape[0]} features, got {X.shape}"
        )
    return (X - transform.mean) @ transform.components.T


def pca_inverse_transform(transform: PcaTransform, Z: np.ndarray) -> np.ndarray:
    """Map projected rows back into the original feature space."""
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2 or Z.shape[1] != transform.n_components:
        raise UsageError(f"expected {transform.n_components} columns, got {Z.shape}")
    return Z @ transform.components + transform.mean
