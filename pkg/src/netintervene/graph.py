"""Undirected simple graph with cached triangle counts and exact LCC queries."""

from __future__ import annotations

import gzip
import io
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np
import scipy.sparse as sp


class GraphError(ValueError):
    """Base class for graph construction and mutation errors."""


class EdgeListParseError(GraphError):
    def __init__(self, lineno: int, line: str, reason: str) -> None:
        super().__init__(f"line {lineno}: {reason}: {line!r}")
        self.lineno = lineno
        self.line = line


class GraphValidationError(GraphError):
    pass


class UnknownNodeError(KeyError):
    pass


def pairs(d: int) -> int:
    """C(d, 2)."""
    return d * (d - 1) // 2


def lcc_value(n_v: int, degree: int) -> float:
    denom = pairs(degree)
    return n_v / denom if denom else 0.0


def lcc_exact(n_v: int, degree: int) -> Fraction:
    denom = pairs(degree)
    return Fraction(n_v, denom) if denom else Fraction(0)


@dataclass
class EdgeAdditionEffect:
    """LCC before/after for every node the edge (u, v) can touch.

    ``affected`` holds exact ``(n_v, d_v)`` pairs before and after for
    ``{u, v} | common_neighbors(u, v)``; ``changed`` is the subset whose
    LCC value actually moved.
    """

    edge: tuple[int, int]
    common: frozenset[int]
    affected: dict[int, tuple[tuple[int, int], tuple[int, int]]] = field(default_factory=dict)

    @property
    def changed(self) -> dict[int, tuple[float, float]]:
        out = {}
        for node, (before, after) in self.affected.items():
            if lcc_exact(*before) != lcc_exact(*after):
                out[node] = (lcc_value(*before), lcc_value(*after))
        return out

    def lcc_after(self, node: int) -> float:
        return lcc_value(*self.affected[node][1])

    def lcc_before(self, node: int) -> float:
        return lcc_value(*self.affected[node][0])


class Graph:
    """Undirected simple graph on dense integer ids ``0..n-1``.

    Triangle counts ``n_v`` (edges among the neighbours of ``v``) are kept
    coherent under :meth:`add_edge`, so :meth:`lcc` is O(1).  Edge insertion
    is the only mutation.
    """

    def __init__(self, num_nodes: int = 0, edges: Iterable[tuple[int, int]] = (),
                 labels: Sequence | None = None) -> None:
        self._adj: list[set[int]] = [set() for _ in range(num_nodes)]
        self._edge_count = 0
        for u, v in edges:
            self._insert(int(u), int(v))
        self._tri = compute_all_triangle_counts(self)
        if labels is not None and len(labels) != num_nodes:
            raise GraphValidationError("labels must have one entry per node")
        self.labels = list(labels) if labels is not None else list(range(num_nodes))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], num_nodes: int | None = None) -> "Graph":
        edges = [(int(u), int(v)) for u, v in edges]
        if num_nodes is None:
            num_nodes = 1 + max((max(e) for e in edges), default=-1)
        return cls(num_nodes, edges)

    def _insert(self, u: int, v: int) -> bool:
        self._check(u)
        self._check(v)
        if u == v:
            raise GraphValidationError(f"self-loop on node {u}")
        if v in self._adj[u]:
            return False
        self._adj[u].add(v)
        self._adj[v].add(u)
        self._edge_count += 1
        return True

    def _check(self, v: int) -> None:
        if not 0 <= v < len(self._adj):
            raise UnknownNodeError(v)

    # queries ---------------------------------------------------------------
    @property
    def num_nodes(self) -> int:
        return len(self._adj)

    @property
    def num_edges(self) -> int:
        return self._edge_count

    def __len__(self) -> int:
        return len(self._adj)

    def nodes(self) -> range:
        return range(len(self._adj))

    def neighbors(self, v: int) -> set[int]:
        """Neighbour set of ``v``; callers must not mutate it."""
        self._check(v)
        return self._adj[v]

    def degree(self, v: int) -> int:
        self._check(v)
        return len(self._adj[v])

    def degrees(self) -> np.ndarray:
        return np.fromiter((len(a) for a in self._adj), dtype=np.int64, count=len(self._adj))

    def has_edge(self, u: int, v: int) -> bool:
        self._check(u)
        self._check(v)
        return v in self._adj[u]

    def common_neighbors(self, u: int, v: int) -> set[int]:
        a, b = self._adj[u], self._adj[v]
        return a & b if len(a) <= len(b) else b & a

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in enumerate(self._adj):
            for v in sorted(nbrs):
                if u < v:
                    yield u, v

    def triangles(self, v: int) -> int:
        self._check(v)
        return self._tri[v]

    def triangle_counts(self) -> list[int]:
        return list(self._tri)

    def lcc_pair(self, v: int) -> tuple[int, int]:
        """Exact ``(n_v, C(d_v, 2))``."""
        self._check(v)
        return self._tri[v], pairs(len(self._adj[v]))

    def lcc(self, v: int) -> float:
        self._check(v)
        return lcc_value(self._tri[v], len(self._adj[v]))

    def lcc_fraction(self, v: int) -> Fraction:
        self._check(v)
        return lcc_exact(self._tri[v], len(self._adj[v]))

    def lcc_array(self) -> np.ndarray:
        deg = self.degrees()
        tri = np.asarray(self._tri, dtype=np.float64)
        denom = deg * (deg - 1) / 2.0
        out = np.zeros(len(deg))
        np.divide(tri, denom, out=out, where=denom > 0)
        return out

    # mutation / what-if ----------------------------------------------------
    def _effect(self, u: int, v: int) -> EdgeAdditionEffect:
        self._check(u)
        self._check(v)
        if u == v:
            raise GraphValidationError(f"self-loop on node {u}")
        if v in self._adj[u]:
            raise GraphValidationError(f"edge ({u}, {v}) already present")
        common = self.common_neighbors(u, v)
        c = len(common)
        eff = EdgeAdditionEffect((u, v), frozenset(common))
        for x in (u, v):
            d = len(self._adj[x])
            eff.affected[x] = ((self._tri[x], d), (self._tri[x] + c, d + 1))
        for w in common:
            d = len(self._adj[w])
            eff.affected[w] = ((self._tri[w], d), (self._tri[w] + 1, d))
        return eff

    def lcc_if_added(self, u: int, v: int) -> EdgeAdditionEffect:
        """Effect of inserting ``(u, v)`` without mutating the graph."""
        return self._effect(u, v)

    def add_edge(self, u: int, v: int) -> EdgeAdditionEffect:
        eff = self._effect(u, v)
        for x, (_, (tri, _d)) in eff.affected.items():
            self._tri[x] = tri
        self._adj[u].add(v)
        self._adj[v].add(u)
        self._edge_count += 1
        return eff

    def copy(self) -> "Graph":
        g = Graph.__new__(Graph)
        g._adj = [set(a) for a in self._adj]
        g._edge_count = self._edge_count
        g._tri = list(self._tri)
        g.labels = list(self.labels)
        return g

    def adjacency_matrix(self, dtype=np.float64) -> sp.csr_matrix:
        n = len(self._adj)
        deg = self.degrees()
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        indices = np.fromiter((w for a in self._adj for w in sorted(a)), dtype=np.int64,
                              count=int(indptr[-1]))
        data = np.ones(len(indices), dtype=dtype)
        return sp.csr_matrix((data, indices, indptr), shape=(n, n))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __repr__(self) -> str:
        return f"Graph(num_nodes={self.num_nodes}, num_edges={self.num_edges})"


def compute_all_triangle_counts(graph: Graph) -> list[int]:
    """Per-node ``n_v`` by an edge scan: each edge bumps its endpoints' common neighbours."""
    adj = graph._adj
    counts = [0] * len(adj)
    for i, nbrs in enumerate(adj):
        for j in nbrs:
            if i < j:
                a, b = (nbrs, adj[j]) if len(nbrs) <= len(adj[j]) else (adj[j], nbrs)
                for w in a & b:
                    counts[w] += 1
    return counts


def lcc(graph: Graph, v: int) -> float:
    return graph.lcc(v)


# edge-list I/O ---------------------------------------------------------------

def parse_edge_list(text: str | Iterable[str]) -> list[tuple[int, int]]:
    lines = text.splitlines() if isinstance(text, str) else text
    out = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("%"):
            continue
        parts = line.split()
        if len(parts) < 2:
            raise EdgeListParseError(lineno, raw, "expected two node ids")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(lineno, raw, "node ids must be integers") from None
        if u == v:
            raise GraphValidationError(f"line {lineno}: self-loop on node {u}")
        out.append((u, v))
    return out


def load_edge_list(source: str | os.PathLike | io.TextIOBase, extra_nodes: Iterable[int] = ()) -> Graph:
    """Build a graph from a whitespace-delimited ``u v`` edge list.

    ``source`` is either edge-list text, a path, or an open text stream.  Original
    labels are remapped to dense ids in ascending label order; ``graph.labels``
    keeps the reverse map.  ``extra_nodes`` adds labels that may be isolated.
    """
    if isinstance(source, io.TextIOBase):
        text = source.read()
    elif isinstance(source, os.PathLike) or (isinstance(source, str) and "\n" not in source
                                              and os.path.exists(source)):
        path = os.fspath(source)
        if path.endswith(".gz"):
            with gzip.open(path, "rt") as fh:
                text = fh.read()
        else:
            with open(path) as fh:
                text = fh.read()
    else:
        text = source
    raw = parse_edge_list(text)
    labels = sorted({x for e in raw for x in e} | {int(x) for x in extra_nodes})
    index = {lab: i for i, lab in enumerate(labels)}
    return Graph(len(labels), ((index[u], index[v]) for u, v in raw), labels=labels)


def dump_edge_list(graph: Graph, use_labels: bool = True) -> str:
    lab = graph.labels if use_labels else list(graph.nodes())
    return "".join(f"{lab[u]} {lab[v]}\n" for u, v in graph.edges())


def gnp_random_graph(n: int, p: float, seed: int | np.random.Generator | None = None) -> Graph:
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))
