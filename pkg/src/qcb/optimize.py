"""Derivative-free optimization of circuit parameters.

The engine is a Nelder-Mead simplex search behind a budgeted interface: the
objectives here are unconstrained, so the simplex method covers what a
linear-approximation trust-region solver would while staying dependency-free.
Accuracy-style losses are piecewise constant, so vertex ordering breaks ties
lexicographically on the parameter vectors to keep runs deterministic, and
evaluations are cached by exact parameter bytes so simplex re-visits do not
burn budget.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError, UsageError

# standard simplex coefficients: reflection, expansion, contraction, shrink
_ALPHA = 1.0
_CHI = 2.0
_PSI = 0.5
_SIGMA = 0.5


@dataclass(frozen=True)
class OptBudget:
    """Evaluation budget and termination settings for one optimization run.

    ``max_evals`` caps the total number of loss evaluations, including the
    ones spent building the initial simplex.  ``tolerance`` bounds both the
    loss spread and the vertex spread of the simplex at termination.
    """

    max_evals: int = 150
    initial_step: float = 0.5
    tolerance: float = 1e-4
    seed: int = 0

    def __post_init__(self) -> None:
        if self.max_evals < 1:
            raise ConfigurationError("max_evals must be >= 1")
        if self.initial_step <= 0:
            raise ConfigurationError("initial_step must be > 0")
        if self.tolerance <= 0:
            raise ConfigurationError("tolerance must be > 0")


@dataclass
class OptResult:
    """Best point ever evaluated, evaluation count, and the loss trace."""

    best_params: np.ndarray
    best_loss: float
    n_evals: int
    trace: list[tuple[int, float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(np.isfinite(self.best_loss))


def random_init(dim: int, seed: int) -> np.ndarray:
    """Draw ``dim`` starting angles uniformly from [0, 2*pi)."""
    if dim < 1:
        raise UsageError("dim must be >= 1")
    return np.random.default_rng(seed).uniform(0.0, 2.0 * np.pi, size=dim)


class _BudgetExhausted(Exception):
    pass


class _Evaluator:
    """Counts, caches, and sanitizes loss evaluations."""

    def __init__(self, loss: Callable[[np.ndarray], float], max_evals: int):
        self._loss = loss
        self._max = max_evals
        self._cache: dict[bytes, float] = {}
        self.n_evals = 0
        self.trace: list[tuple[int, float]] = []
        self.best_loss = np.inf
        self.best_params: np.ndarray | None = None

    def __call__(self, x: np.ndarray) -> float:
        key = x.tobytes()
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        if self.n_evals >= self._max:
            raise _BudgetExhausted
        raw = self._loss(x)
        self.n_evals += 1
        value = float(raw) if np.isfinite(raw) else np.inf
        self._cache[key] = value
        self.trace.append((self.n_evals, value))
        # on ties the first point evaluated wins, so a flat landscape keeps x0
        if value < self.best_loss or self.best_params is None:
            self.best_loss = value
            self.best_params = x.copy()
        return value


def minimize(
    loss: Callable[[np.ndarray], float],
    x0: Sequence[float],
    budget: OptBudget,
) -> OptResult:
    """Minimize a black-box loss with a budgeted Nelder-Mead simplex search.

    Non-finite loss values are treated as +inf and the search continues; if
    every evaluation is non-finite the returned result has ``ok`` False.
    The result always carries the best point ever evaluated, not the final
    simplex centroid.
    """
    start = np.asarray(x0, dtype=float).ravel()
    if start.size < 1:
        raise UsageError("x0 must have at least one element")
    dim = start.size
    evaluate = _Evaluator(loss, budget.max_evals)

    points: list[np.ndarray] = []
    values: list[float] = []
    try:
        points.append(start.copy())
        values.append(evaluate(points[0]))
        for i in range(dim):
            vertex = start.copy()
            vertex[i] += budget.initial_step
            points.append(vertex)
            values.append(evaluate(vertex))

        while True:
            order = sorted(range(dim + 1), key=lambda k: (values[k], tuple(points[k])))
            points = [points[k] for k in order]
            values = [values[k] for k in order]

            flat = (
                np.isfinite(values[-1])
                and values[-1] - values[0] <= budget.tolerance
            )
            tight = (
                max(np.max(np.abs(p - points[0])) for p in points[1:])
                <= budget.tolerance
            )
            if flat and tight:
                break

            centroid = np.mean(points[:-1], axis=0)
            worst = points[-1]
            reflected = centroid + _ALPHA * (centroid - worst)
            f_reflected = evaluate(reflected)

            if f_reflected < values[0]:
                expanded = centroid + _CHI * (centroid - worst)
                f_expanded = evaluate(expanded)
                if f_expanded < f_reflected:
                    points[-1], values[-1] = expanded, f_expanded
                else:
                    points[-1], values[-1] = reflected, f_reflected
            elif f_reflected < values[-2]:
                points[-1], values[-1] = reflected, f_reflected
            else:
                if f_reflected < values[-1]:
                    contracted = centroid + _PSI * (centroid - worst)
                    f_contracted = evaluate(contracted)
                    if f_contracted <= f_reflected:
                        points[-1], values[-1] = contracted, f_contracted
                        continue
                else:
                    contracted = centroid - _PSI * (centroid - worst)
                    f_contracted = evaluate(contracted)
                    if f_contracted < values[-1]:
                        points[-1], values[-1] = contracted, f_contracted
                        continue
                # shrink toward the current best vertex
                for k in range(1, dim + 1):
                    points[k] = points[0] + _SIGMA * (points[k] - points[0])
                    values[k] = evaluate(points[k])
    except _BudgetExhausted:
        pass

    best_params = evaluate.best_params if evaluate.best_params is not None else start
    return OptResult(
        best_params=np.asarray(best_params, dtype=float),
        best_loss=evaluate.best_loss,
        n_evals=evaluate.n_evals,
        trace=evaluate.trace,
    )
