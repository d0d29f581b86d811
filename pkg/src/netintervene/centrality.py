"""Betweenness, harmonic closeness and a PageRank influence score.

Shortest-path work is done by a level-synchronous BFS over a batch of
sources at once (sparse adjacency times a dense ``n x batch`` block), so the
Brandes forward and backward passes vectorise across sources.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph

DEFAULT_SAMPLES = 256
_BATCH = 64


class CentralityConfigError(ValueError):
    pass


class ConvergenceError(ArithmeticError):
    def __init__(self, residual: float, iterations: int) -> None:
        super().__init__(f"power iteration did not converge after {iterations} "
                         f"iterations (L1 residual {residual:.3e})")
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class CentralityMode:
    kind: str = "exact"
    samples: int = DEFAULT_SAMPLES
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("exact", "sampled"):
            raise CentralityConfigError(f"unknown centrality mode {self.kind!r}")
        if self.kind == "sampled" and self.samples < 1:
            raise CentralityConfigError("sample_count must be >= 1")

    @classmethod
    def sampled(cls, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> "CentralityMode":
        return cls("sampled", samples, seed)

    def as_dict(self) -> dict:
        if self.kind == "exact":
            return {"kind": "exact"}
        return {"kind": "sampled", "samples": self.samples, "seed": self.seed}


EXACT = CentralityMode()


@dataclass(frozen=True)
class CentralitySnapshot:
    betweenness: np.ndarray
    closeness: np.ndarray
    mode: CentralityMode

    def __post_init__(self) -> None:
        self.betweenness.setflags(write=False)
        self.closeness.setflags(write=False)


@dataclass(frozen=True)
class InfluenceScores:
    scores: np.ndarray
    damping: float
    tolerance: float
    iterations: int


def pivot_sources(n: int, mode: CentralityMode) -> np.ndarray:
    if mode.kind == "exact" or mode.samples >= n:
        return np.arange(n)
    rng = np.random.default_rng(mode.seed)
    return np.sort(rng.choice(n, size=mode.samples, replace=False))


def _bfs_batch(A, sources: np.ndarray, want_sigma: bool):
    n = A.shape[0]
    b = len(sources)
    cols = np.arange(b)
    dist = np.full((n, b), -1, dtype=np.int32)
    dist[sources, cols] = 0
    sigma = np.zeros((n, b))
    sigma[sources, cols] = 1.0
    frontier = sigma.copy()
    level = 0
    while True:
        reached = A @ frontier
        new = (dist < 0) & (reached > 0)
        if not new.any():
            break
        level += 1
        dist[new] = level
        if want_sigma:
            sigma[new] = reached[new]
            frontier = np.where(new, sigma, 0.0)
        else:
            frontier = new.astype(np.float64)
    return dist, sigma, level


def _accumulate(A, dist: np.ndarray, sigma: np.ndarray, depth: int) -> np.ndarray:
    delta = np.zeros_like(sigma)
    for lvl in range(depth, 0, -1):
        at = dist == lvl
        coef = np.zeros_like(sigma)
        coef[at] = (1.0 + delta[at]) / sigma[at]
        back = A @ coef
        prev = dist == lvl - 1
        delta[prev] += sigma[prev] * back[prev]
    return delta


def _sweep(graph: Graph, mode: CentralityMode, want_b: bool, want_c: bool):
    n = graph.num_nodes
    bsum = np.zeros(n)
    csum = np.zeros(n)
    src = pivot_sources(n, mode)
    if n == 0:
        return bsum, csum, src
    A = graph.adjacency_matrix()
    for start in range(0, len(src), _BATCH):
        batch = src[start:start + _BATCH]
        dist, sigma, depth = _bfs_batch(A, batch, want_sigma=want_b)
        if want_b:
            delta = _accumulate(A, dist, sigma, depth)
            delta[batch, np.arange(len(batch))] = 0.0
            bsum += delta.sum(axis=1)
        if want_c:
            inv = np.zeros(dist.shape)
            np.divide(1.0, dist, out=inv, where=dist > 0)
            csum += inv.sum(axis=1)
    return bsum, csum, src


def _normalise_b(bsum: np.ndarray, n: int, s: int) -> np.ndarray:
    if n < 3:
        return np.zeros(n)
    # each unordered pair is seen from both ends when all sources are used
    out = bsum * (n / s) / ((n - 1) * (n - 2))
    return np.clip(out, 0.0, 1.0)


def _normalise_c(csum: np.ndarray, n: int, s: int) -> np.ndarray:
    if n < 2:
        return np.zeros(n)
    return np.clip(csum * (n / s) / (n - 1), 0.0, 1.0)


def betweenness(graph: Graph, mode: CentralityMode = EXACT) -> np.ndarray:
    """Shortest-path betweenness normalised by ``(n-1)(n-2)/2``, endpoints excluded.

    Sampled mode scales the pivot-source sum by ``n / samples`` (an unbiased
    estimate of the exact value) and clips to ``[0, 1]``.
    """
    bsum, _, src = _sweep(graph, mode, True, False)
    return _normalise_b(bsum, graph.num_nodes, max(len(src), 1))


def closeness(graph: Graph, mode: CentralityMode = EXACT) -> np.ndarray:
    """Harmonic closeness ``sum(1/dist) / (n-1)``; unreachable pairs add 0."""
    _, csum, src = _sweep(graph, mode, False, True)
    return _normalise_c(csum, graph.num_nodes, max(len(src), 1))


def centrality(graph: Graph, mode: CentralityMode = EXACT) -> CentralitySnapshot:
    bsum, csum, src = _sweep(graph, mode, True, True)
    n, s = graph.num_nodes, max(len(src), 1)
    return CentralitySnapshot(_normalise_b(bsum, n, s), _normalise_c(csum, n, s), mode)


def refresh_after_insert(snapshot: CentralitySnapshot, graph: Graph, u: int, v: int) -> CentralitySnapshot:
    """Snapshot for ``graph`` after ``(u, v)`` was inserted.

    Recomputes under the snapshot's own mode and seed, so the result is the
    from-scratch value by construction.
    """
    if not graph.has_edge(u, v):
        raise ValueError(f"edge ({u}, {v}) has not been inserted")
    return centrality(graph, snapshot.mode)


def pagerank_influence(graph: Graph, damping: float = 0.85, tolerance: float = 1e-10,
                       max_iter: int = 1000) -> InfluenceScores:
    if not 0.0 < damping < 1.0:
        raise CentralityConfigError("damping must lie in (0, 1)")
    n = graph.num_nodes
    if n == 0:
        return InfluenceScores(np.zeros(0), damping, tolerance, 0)
    A = graph.adjacency_matrix()
    deg = graph.degrees().astype(np.float64)
    dangling = deg == 0
    inv = np.zeros(n)
    np.divide(1.0, deg, out=inv, where=~dangling)
    x = np.full(n, 1.0 / n)
    residual = np.inf
    for it in range(1, max_iter + 1):
        nxt = damping * (A @ (x * inv) + x[dangling].sum() / n) + (1.0 - damping) / n
        nxt /= nxt.sum()
        residual = float(np.abs(nxt - x).sum())
        x = nxt
        if residual < tolerance:
            return InfluenceScores(x, damping, tolerance, it)
    raise ConvergenceError(residual, max_iter)
