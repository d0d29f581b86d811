"""Threshold graphs: realisation from weights, the three-band partition, recognition."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph


class PartitionError(AssertionError):
    pass


@dataclass(frozen=True)
class ThresholdGraphSpec:
    weights: tuple[float, ...]
    threshold: float

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=np.float64)
        if not np.all(np.isfinite(w)) or not np.isfinite(self.threshold):
            raise ValueError("weights and threshold must be finite")

    @classmethod
    def sorted(cls, weights, threshold: float) -> "ThresholdGraphSpec":
        # stable sort keeps the original order among equal weights
        order = np.argsort(np.asarray(weights, dtype=np.float64), kind="stable")
        return cls(tuple(float(weights[i]) for i in order), float(threshold))

    @property
    def n(self) -> int:
        return len(self.weights)

    def as_dict(self) -> dict:
        return {"weights": list(self.weights), "threshold": self.threshold}


@dataclass(frozen=True)
class ThresholdPartition:
    isolated: tuple[int, ...]     # V_Z
    independent: tuple[int, ...]  # V_D
    clique: tuple[int, ...]       # V_C
    z: int
    c: int


def realize(spec: ThresholdGraphSpec) -> Graph:
    """Node ``i`` carries ``weights[i]``; ``(i, j)`` is an edge iff the weights sum above the threshold."""
    w = np.asarray(spec.weights, dtype=np.float64)
    n = len(w)
    iu, ju = np.triu_indices(n, k=1)
    keep = w[iu] + w[ju] > spec.threshold
    return Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def partition(spec: ThresholdGraphSpec, graph: Graph | None = None) -> ThresholdPartition:
    """Split ascending-weight nodes into isolated prefix, independent band and clique suffix.

    With 1-based ids, ``z`` is the largest id with ``f(z) + f(n) <= t``; ``c`` is
    the id with ``f(c-1) + f(c) <= t < f(c) + f(c+1)``.  When the smallest
    adjacent pair already exceeds ``t`` the graph is complete and ``c = 0``;
    when no adjacent pair does, ``c = n``.
    """
    w = np.asarray(spec.weights, dtype=np.float64)
    if np.any(np.diff(w) < 0):
        raise ValueError("weights must be sorted ascending")
    n, thr = len(w), spec.threshold
    if n == 0:
        return ThresholdPartition((), (), (), 0, 0)
    z = int(np.count_nonzero(w + w[-1] <= thr))
    low_pairs = int(np.count_nonzero(w[:-1] + w[1:] <= thr))
    c = 0 if low_pairs == 0 else low_pairs + 1
    z = min(z, c)
    part = ThresholdPartition(tuple(range(z)), tuple(range(z, c)), tuple(range(c, n)), z, c)
    _verify(part, graph if graph is not None else realize(spec))
    return part


def _verify(part: ThresholdPartition, g: Graph) -> None:
    for v in part.isolated:
        if g.degree(v):
            raise PartitionError(f"node {v} in the isolated band has neighbours")
    band = part.isolated + part.independent
    for i, u in enumerate(band):
        for v in band[i + 1:]:
            if g.has_edge(u, v):
                raise PartitionError(f"edge ({u}, {v}) inside the independent band")
    cl = part.clique
    for i, u in enumerate(cl):
        for v in cl[i + 1:]:
            if not g.has_edge(u, v):
                raise PartitionError(f"missing edge ({u}, {v}) inside the clique")


def random_spec(n: int, seed: int | None = None) -> ThresholdGraphSpec:
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = np.random.default_rng(seed)
    w = np.sort(rng.uniform(0.0, 1.0, size=n))
    return ThresholdGraphSpec(tuple(float(x) for x in w), float(rng.uniform(0.5, 1.5)))


def is_threshold(graph: Graph) -> tuple[bool, list[tuple[int, str]]]:
    """Strip isolated or dominating vertices until nothing is left.

    Returns ``(ok, sequence)`` where ``sequence`` lists ``(node, 'i'|'d')`` in
    stripping order; reversed, it is a creation sequence for the graph.
    When ``ok`` is false the sequence stops where no vertex qualified.
    """
    alive = set(graph.nodes())
    deg = {v: graph.degree(v) for v in alive}
    seq: list[tuple[int, str]] = []
    while alive:
        m = len(alive)
        pick = None
        for v in sorted(alive):
            if deg[v] == 0:
                pick = (v, "i")
                break
            if deg[v] == m - 1:
                pick = (v, "d")
                break
        if pick is None:
            return False, seq
        v = pick[0]
        seq.append(pick)
        alive.discard(v)
        for w in graph.neighbors(v):
            if w in alive:
                deg[w] -= 1
    return True, seq
