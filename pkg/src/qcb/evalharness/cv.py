"""Stratified cross-validation folds and the evaluation plan."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import UsageError


@dataclass(frozen=True)
class CvPlan:
    """Fold count and the list of shuffling seeds (one CV round per seed)."""

    n_folds: int = 5
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    stratified: bool = True

    def __post_init__(self) -> None:
        if self.n_folds < 2:
            raise UsageError("n_folds must be >= 2")
        if not self.seeds:
            raise UsageError("at least one seed required")
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))


def stratified_folds(y, n_folds: int, seed: int) -> np.ndarray:
    """Assign each sample to a fold, preserving class proportions.

    Within each class the indices are shuffled and dealt round-robin, so
    per-class fold sizes differ by at most one.  Classes smaller than the
    fold count are an error (named in the message).
    """
    y = np.asarray(y)
    if y.ndim != 1 or len(y) == 0:
        raise UsageError("y must be a non-empty vector")
    if n_folds < 2:
        raise UsageError("n_folds must be >= 2")
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(y), dtype=int)
    for label in np.unique(y):
        members = np.nonzero(y == label)[0]
        if len(members) < n_folds:
            raise UsageError(
                f"class {label!r} has {len(members)} members, fewer than "
                f"{n_folds} folds"
            )
        shuffled = rng.permutation(members)
        assignment[shuffled] = np.arange(len(members)) % n_folds
    return assignment


def holdout_split(y, test_fraction: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Stratified train/test split; returns (train_idx, test_idx)."""
    y = np.asarray(y)
    if not 0.0 < test_fraction < 1.0:
        raise UsageError("test_fraction must be in (0, 1)")
    rng = np.random.default_rng(seed)
    train, test = [], []
    for label in np.unique(y):
        members = rng.permutation(np.nonzero(y == label)[0])
        n_test = max(1, int(round(len(members) * test_fraction)))
        if n_test >= len(members):
            raise UsageError(f"class {label!r} too small for the requested split")
        test.extend(members[:n_test])
        train.extend(members[n_test:])
    return np.sort(np.array(train)), np.sort(np.array(test))
