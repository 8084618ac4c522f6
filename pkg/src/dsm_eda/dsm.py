"""Doubly stochastic matrices and how to learn them from permutations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .perm import Permutation

DSM_TOL = 1e-9


def validate_dsm(m, tol: float = DSM_TOL) -> bool:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        return False
    if not np.all(np.isfinite(m)) or np.any(m < 0):
        return False
    return bool(
        np.all(np.abs(m.sum(axis=0) - 1) <= tol) and np.all(np.abs(m.sum(axis=1) - 1) <= tol)
    )


@dataclass(frozen=True, eq=False)
class DoublyStochasticMatrix:
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if not validate_dsm(values, DSM_TOL):
            raise ValueError("matrix is not doubly stochastic")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @classmethod
    def from_permutation(cls, p: Permutation) -> "DoublyStochasticMatrix":
        m = np.zeros((p.n, p.n))
        m[np.arange(p.n), p.zero_based()] = 1.0
        return cls(m)

    def to_text(self) -> str:
        lines = [str(self.n)]
        lines += [" ".join(repr(float(x)) for x in row) for row in self.values]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DoublyStochasticMatrix":
        """Parse ``n`` followed by ``n`` rows of ``n`` reals."""
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty DSM file")
        try:
            n = int(lines[0])
        except ValueError:
            raise ValueError(f"first line must be the size, got {lines[0]!r}") from None
        if n < 1 or len(lines) != n + 1:
            raise ValueError(f"expected {n} matrix rows, got {len(lines) - 1}")
        rows = []
        for k, ln in enumerate(lines[1:], start=2):
            try:
                row = [float(tok) for tok in ln.split()]
            except ValueError:
                raise ValueError(f"line {k}: non-numeric entry") from None
            if len(row) != n:
                raise ValueError(f"line {k}: expected {n} values, got {len(row)}")
            rows.append(row)
        return cls(np.array(rows))


@dataclass(frozen=True)
class LearningConfig:
    alpha: float
    weights: Optional[Sequence[float]] = None

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if np.any(w < 0) or not np.any(w > 0):
                raise ValueError("weights must be non-negative with at least one positive")


def uniform_dsm(n: int) -> DoublyStochasticMatrix:
    if n < 1:
        raise ValueError("n must be >= 1")
    return DoublyStochasticMatrix(np.full((n, n), 1.0 / n))


def _centroid(sample: Sequence[Permutation], weights) -> np.ndarray:
    if len(sample) == 0:
        raise ValueError("cannot learn from an empty sample")
    n = sample[0].n
    if any(p.n != n for p in sample):
        raise ValueError("all permutations must have the same size")
    m = len(sample)
    if weights is None:
        w = np.full(m, 1.0 / m)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (m,):
            raise ValueError(f"expected {m} weights, got {w.shape}")
        if np.any(w < 0) or not np.any(w > 0):
            raise ValueError("weights must be non-negative with at least one positive")
        w = w / w.sum()
    d = np.zeros((n, n))
    rows = np.arange(n)
    for wk, p in zip(w, sample):
        d[rows, p.zero_based()] += wk
    return d


def learn_exact(sample: Sequence[Permutation], weights=None) -> DoublyStochasticMatrix:
    """Weighted centroid of the sample's permutation matrices (uniform weights by default)."""
    return DoublyStochasticMatrix(_centroid(sample, weights))


def learn_smoothed(sample: Sequence[Permutation], cfg: LearningConfig) -> DoublyStochasticMatrix:
    """Centroid mixed with the uniform matrix: ``(1 - alpha) * centroid + alpha * U``.

    Every entry of the result is at least ``alpha / n``, so no assignment is
    ever ruled out.
    """
    d = _centroid(sample, cfg.weights)
    n = d.shape[0]
    return DoublyStochasticMatrix((1.0 - cfg.alpha) * d + cfg.alpha / n)
