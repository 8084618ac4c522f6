"""Sampling permutations from a doubly stochastic matrix.

Three strategies are provided:

* ``sample_ps`` (probabilistic): fixes one assignment per step by drawing from
  a randomly chosen row or column, restricted to the rows and columns that are
  still free.
* ``sample_as`` (algebraic): randomized rounding of ``D @ v`` for a uniform
  random vector ``v``.
* ``sample_gs`` (geometric): categorical draw over the terms of a Birkhoff
  decomposition of ``D``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .dsm import DSM_TOL, DoublyStochasticMatrix
from .perm import Permutation, argsort_vector, compose, rank_vector

EPS_ZERO = 1e-12
PMF_ORACLE_MAX_N = 9

SAMPLER_NAMES = ("ps", "as", "gs")


class NumericalError(RuntimeError):
    pass


class DeadLineError(NumericalError):
    """All free entries of the selected row or column are zero."""


class BirkhoffError(NumericalError):
    def __init__(self, residual_mass: float):
        super().__init__(f"no perfect matching in residual support (residual mass {residual_mass:.3e})")
        self.residual_mass = residual_mass


def rng_stream(seed: int, lane: int = 0) -> np.random.Generator:
    """Generator for one sampling lane; lane ``k`` of master seed ``s`` is seeded with ``s + k``."""
    return np.random.default_rng(int(seed) + int(lane))


def _pick(weights: np.ndarray, u: float) -> int:
    # inverse-CDF draw; entries with zero weight are never returned
    cum = np.cumsum(weights)
    j = int(np.searchsorted(cum, u * cum[-1], side="right"))
    if j >= len(weights):
        # u * total rounded up to total
        j = int(np.flatnonzero(weights > 0)[-1])
    return j


def sample_ps(d: DoublyStochasticMatrix, rng: np.random.Generator) -> Permutation:
    vals = d.values
    n = d.n
    row_free = np.ones(n, dtype=bool)
    col_free = np.ones(n, dtype=bool)
    sigma = np.empty(n, dtype=np.intp)
    u = rng.random(2 * n)
    for step in range(n):
        rows = np.flatnonzero(row_free)
        cols = np.flatnonzero(col_free)
        left = n - step
        k = min(int(u[2 * step] * 2 * left), 2 * left - 1)
        if k < left:
            r = rows[k]
            p = vals[r, cols]
            if not p.sum() > 0:
                raise DeadLineError(f"row {r + 1} has no mass on the free columns")
            c = cols[_pick(p, u[2 * step + 1])]
        else:
            c = cols[k - left]
            p = vals[rows, c]
            if not p.sum() > 0:
                raise DeadLineError(f"column {c + 1} has no mass on the free rows")
            r = rows[_pick(p, u[2 * step + 1])]
        sigma[r] = c
        row_free[r] = False
        col_free[c] = False
    return Permutation.from_zero_based(sigma)


def _kth_true(mask: np.ndarray, k: np.ndarray) -> np.ndarray:
    """Column index of the (k+1)-th True entry in each row of ``mask``."""
    return np.argmax(np.cumsum(mask, axis=1) > k[:, None], axis=1)


def sample_ps_batch(d: DoublyStochasticMatrix, rng: np.random.Generator, size: int) -> list[Permutation]:
    """``size`` independent draws of the ``sample_ps`` procedure, vectorised across draws."""
    vals = d.values
    n = d.n
    m = int(size)
    if m <= 0:
        return []
    row_free = np.ones((m, n), dtype=bool)
    col_free = np.ones((m, n), dtype=bool)
    sigma = np.empty((m, n), dtype=np.intp)
    idx = np.arange(m)
    u = rng.random((n, 2, m))
    for step in range(n):
        left = n - step
        k = np.minimum((u[step, 0] * (2 * left)).astype(np.intp), 2 * left - 1)
        by_row = k < left
        line = np.where(
            by_row,
            _kth_true(row_free, np.where(by_row, k, 0)),
            _kth_true(col_free, np.where(by_row, 0, k - left)),
        )
        weights = np.where(by_row[:, None], vals[line, :] * col_free, vals[:, line].T * row_free)
        cum = np.cumsum(weights, axis=1)
        total = cum[:, -1]
        dead = ~(total > 0)
        if dead.any():
            j = int(np.flatnonzero(dead)[0])
            kind = "row" if by_row[j] else "column"
            free = "columns" if by_row[j] else "rows"
            raise DeadLineError(f"{kind} {line[j] + 1} has no mass on the free {free}")
        hit = cum > (u[step, 1] * total)[:, None]
        last_positive = n - 1 - np.argmax(weights[:, ::-1] > 0, axis=1)
        pick = np.where(hit.any(axis=1), np.argmax(hit, axis=1), last_positive)
        r = np.where(by_row, line, pick)
        c = np.where(by_row, pick, line)
        sigma[idx, r] = c
        row_free[idx, r] = False
        col_free[idx, c] = False
    return [Permutation.from_zero_based(row) for row in sigma]


def algebraic_round(d: DoublyStochasticMatrix, v) -> Permutation:
    """Permutation whose matrix ``P`` minimises ``||D v - P v||``.

    Pairing the entries of ``D v`` with those of ``v`` rank by rank gives
    ``sigma(i) = argsort(v)[rank(D v)[i]]``.
    """
    v = np.asarray(v, dtype=float)
    if v.shape != (d.n,):
        raise ValueError(f"expected a vector of length {d.n}")
    # row-wise reduction keeps identical rows bit-identical (exact ties on U)
    dv = (d.values * v).sum(axis=1)
    return compose(argsort_vector(v), rank_vector(dv))


def sample_as(d: DoublyStochasticMatrix, rng: np.random.Generator) -> Permutation:
    return algebraic_round(d, rng.random(d.n))


@dataclass(frozen=True)
class BirkhoffDecomposition:
    terms: tuple[tuple[float, Permutation], ...]

    @property
    def k(self) -> int:
        return len(self.terms)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.terms])

    def reconstruct(self) -> np.ndarray:
        n = self.terms[0][1].n
        out = np.zeros((n, n))
        rows = np.arange(n)
        for w, p in self.terms:
            out[rows, p.zero_based()] += w
        return out


def _hk_match(adj: list[list[int]], n: int) -> Optional[list[int]]:
    inf = n + 1
    match_l = [-1] * n
    match_r = [-1] * n
    dist = [0] * n

    def bfs() -> bool:
        q = deque()
        for u in range(n):
            if match_l[u] < 0:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = inf
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w < 0:
                    found = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = match_r[v]
            if w < 0 or (dist[w] == dist[u] + 1 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = inf
        return False

    size = 0
    while bfs():
        for u in range(n):
            if match_l[u] < 0 and dfs(u):
                size += 1
    return match_l if size == n else None


def hopcroft_karp(support) -> Optional[Permutation]:
    """Perfect matching of a bipartite graph given as an ``n x n`` boolean row/column mask.

    Returns ``None`` when no perfect matching exists. Neighbours are scanned in
    ascending column order, so the result is deterministic.
    """
    mask = np.asarray(support, dtype=bool)
    if mask.ndim != 2 or mask.shape[0] != mask.shape[1]:
        raise ValueError("support must be a square boolean matrix")
    n = mask.shape[0]
    adj = [np.flatnonzero(row).tolist() for row in mask]
    match = _hk_match(adj, n)
    if match is None:
        return None
    return Permutation.from_zero_based(match)


def birkhoff_decompose(d: DoublyStochasticMatrix) -> BirkhoffDecomposition:
    residual = np.array(d.values, dtype=float)
    n = d.n
    rows = np.arange(n)
    terms = []
    while (mass := residual.sum()) >= EPS_ZERO * n:
        p = hopcroft_karp(residual > EPS_ZERO)
        if p is None:
            # leftover rounding dust with no matching left is not a failure
            if mass / n <= DSM_TOL:
                break
            raise BirkhoffError(float(mass))
        cols = p.zero_based()
        w = float(residual[rows, cols].min())
        residual[rows, cols] -= w
        terms.append((w, p))
    total = sum(w for w, _ in terms)
    return BirkhoffDecomposition(tuple((w / total, p) for w, p in terms))


def sample_gs(dec: BirkhoffDecomposition, rng: np.random.Generator) -> Permutation:
    return dec.terms[_pick(dec.weights, rng.random())][1]


def make_sampler(name: str, d: DoublyStochasticMatrix) -> Callable[[np.random.Generator], Permutation]:
    """Bind a sampler to a model; for ``gs`` the decomposition is computed once here."""
    name = name.lower()
    if name == "ps":
        return lambda rng: sample_ps(d, rng)
    if name == "as":
        return lambda rng: sample_as(d, rng)
    if name == "gs":
        dec = birkhoff_decompose(d)
        return lambda rng: sample_gs(dec, rng)
    raise ValueError(f"unknown sampler {name!r}; expected one of {SAMPLER_NAMES}")


def draw_many(name: str, d: DoublyStochasticMatrix, rng: np.random.Generator, size: int) -> list[Permutation]:
    """``size`` draws from ``d`` with the named sampler (batched for ``ps``)."""
    if name.lower() == "ps":
        return sample_ps_batch(d, rng, size)
    draw = make_sampler(name, d)
    return [draw(rng) for _ in range(size)]


def _permanent_terms(vals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = vals.shape[0]
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    return perms, vals[np.arange(n), perms].prod(axis=1)


def pmf_oracle(d: DoublyStochasticMatrix, sigma: Permutation) -> float:
    """``prod_i d[i, sigma_i] / perm(D)``, with the permanent computed by full enumeration."""
    if d.n > PMF_ORACLE_MAX_N:
        raise ValueError(f"pmf_oracle enumerates n! permutations; n={d.n} > {PMF_ORACLE_MAX_N}")
    if sigma.n != d.n:
        raise ValueError("size mismatch")
    _, prods = _permanent_terms(d.values)
    num = float(d.values[np.arange(d.n), sigma.zero_based()].prod())
    return num / float(prods.sum())


def pmf_table(d: DoublyStochasticMatrix) -> dict[Permutation, float]:
    """The whole distribution of ``pmf_oracle`` over all ``n!`` permutations."""
    if d.n > PMF_ORACLE_MAX_N:
        raise ValueError(f"n={d.n} > {PMF_ORACLE_MAX_N}")
    perms, prods = _permanent_terms(d.values)
    total = prods.sum()
    return {Permutation.from_zero_based(p): float(x / total) for p, x in zip(perms, prods)}
