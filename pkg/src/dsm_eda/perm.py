"""Permutations in linear (1-based vector) and 0/1-matrix encodings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{1, ..., n}`` stored as the tuple ``(sigma_1, ..., sigma_n)``."""

    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        n = len(entries)
        if n < 1:
            raise ValueError("a permutation needs at least one entry")
        if sorted(entries) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {entries}")
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> int:
        # 1-based access, like sigma(i)
        if not 1 <= i <= self.n:
            raise IndexError(i)
        return self.entries[i - 1]

    def __str__(self) -> str:
        return " ".join(map(str, self.entries))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_zero_based(cls, arr: Sequence[int]) -> "Permutation":
        return cls(tuple(int(a) + 1 for a in arr))

    @classmethod
    def parse(cls, line: str) -> "Permutation":
        return cls(tuple(int(tok) for tok in line.split()))

    def zero_based(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=np.intp) - 1


@dataclass(frozen=True)
class PermutationMatrix:
    """Sparse 0/1 permutation matrix: row ``i`` has its single 1 in column ``one_positions[i-1]``."""

    one_positions: tuple[int, ...]

    def __post_init__(self):
        # validates the bijection
        object.__setattr__(self, "one_positions", Permutation(self.one_positions).entries)

    @property
    def n(self) -> int:
        return len(self.one_positions)

    def dense(self, dtype=float) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=dtype)
        out[np.arange(self.n), np.asarray(self.one_positions) - 1] = 1
        return out

    @classmethod
    def from_dense(cls, m) -> "PermutationMatrix":
        m = np.asarray(m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("permutation matrix must be square")
        if not np.all((m == 0) | (m == 1)):
            raise ValueError("permutation matrix must be 0/1")
        if not (np.all(m.sum(axis=0) == 1) and np.all(m.sum(axis=1) == 1)):
            raise ValueError("need exactly one 1 per row and per column")
        return cls(tuple(int(j) + 1 for j in np.argmax(m, axis=1)))


def to_matrix(p: Permutation) -> PermutationMatrix:
    return PermutationMatrix(p.entries)


def from_matrix(m: PermutationMatrix) -> Permutation:
    return Permutation(m.one_positions)


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.n
    for i, e in enumerate(p.entries, start=1):
        inv[e - 1] = i
    return Permutation(tuple(inv))


def compose(a: Permutation, b: Permutation) -> Permutation:
    """``(a o b)(i) = a(b(i))``."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    return Permutation(tuple(a.entries[e - 1] for e in b.entries))


def argsort_vector(v) -> Permutation:
    """Indices of ``v`` in ascending order of value; ties keep the lower index first."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise ValueError("expected a non-empty vector")
    return Permutation.from_zero_based(np.argsort(v, kind="stable"))


def rank_vector(v) -> Permutation:
    """``rank(v)[i] = j`` when ``v[i]`` is the j-th smallest entry (the inverse of argsort)."""
    return inverse(argsort_vector(v))
