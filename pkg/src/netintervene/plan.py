"""Solver configuration, intervention plans and the from-scratch constraint audit."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .centrality import EXACT, CentralityMode, centrality
from .graph import Graph

TAU_EPS = 1e-12


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    """Budget, degradation bound and centrality floors shared by all solvers.

    ``omega_d`` is either a number applied to every target, a mapping
    ``target -> floor``, or ``None`` for "current degree + 1".  The floors
    are met when the value is at least the bound, so zero disables a floor.
    """

    k: int = 1
    tau: float = 0.12
    omega_b: float = 0.01
    omega_c: float = 0.1
    omega_d: float | Mapping[int, float] | None = 0
    miss_mode: str = "adaptive"
    miss_weights: tuple[float, float] = (0.33, 0.33)
    seed: int = 0
    centrality_mode: CentralityMode = EXACT

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ConfigError("k must be non-negative")
        if self.tau < 0:
            raise ConfigError("tau must be non-negative")
        if self.miss_mode not in ("adaptive", "static"):
            raise ConfigError(f"unknown MISS mode {self.miss_mode!r}")
        wb, wc = self.miss_weights
        if wb < 0 or wc < 0 or wb + wc > 1 + 1e-12:
            raise ConfigError("static MISS weights must be >= 0 and sum to at most 1")

    def degree_floor(self, graph: Graph, t: int) -> float:
        if self.omega_d is None:
            return graph.degree(t) + 1
        if isinstance(self.omega_d, Mapping):
            return self.omega_d.get(t, 0)
        return self.omega_d

    def needs_centrality(self) -> bool:
        return self.miss_mode == "static" or self.omega_b > 0 or self.omega_c > 0

    def replace(self, **kw) -> "SolverConfig":
        data = {f: getattr(self, f) for f in self.__dataclass_fields__}
        data.update(kw)
        return SolverConfig(**data)

    def as_dict(self) -> dict:
        od = self.omega_d
        if isinstance(od, Mapping):
            od = {str(k): v for k, v in sorted(od.items())}
        return {
            "k": self.k, "tau": self.tau, "omega_b": self.omega_b, "omega_c": self.omega_c,
            "omega_d": od, "miss_mode": self.miss_mode, "miss_weights": list(self.miss_weights),
            "seed": self.seed, "centrality_mode": self.centrality_mode.as_dict(),
        }


@dataclass(frozen=True)
class NodeMetrics:
    lcc: float
    degree: int
    betweenness: float
    closeness: float

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Violation:
    constraint: str
    node: int
    amount: float

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class InterventionPlan:
    algorithm: str
    edges: list[tuple[int, int]]
    targets: list[int]
    objective: float
    objective_exact: Fraction
    objective_before: float
    metrics_before: dict[int, NodeMetrics]
    metrics_after: dict[int, NodeMetrics]
    violations: list[Violation]
    diagnostics: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return not self.violations

    @property
    def tau_feasible(self) -> bool:
        return not any(v.constraint == "tau" for v in self.violations)

    @property
    def max_lcc_after(self) -> float:
        return max((m.lcc for m in self.metrics_after.values()), default=0.0)

    @property
    def max_lcc_before(self) -> float:
        return max((m.lcc for m in self.metrics_before.values()), default=0.0)

    def as_dict(self, labels: Sequence | None = None) -> dict:
        lab = (lambda v: labels[v]) if labels is not None else (lambda v: v)
        return {
            "algorithm": self.algorithm,
            "edges": [[lab(u), lab(v)] for u, v in self.edges],
            "targets": [lab(t) for t in self.targets],
            "objective_before": self.objective_before,
            "objective": self.objective,
            "objective_exact": [self.objective_exact.numerator, self.objective_exact.denominator],
            "max_lcc_before": self.max_lcc_before,
            "max_lcc_after": self.max_lcc_after,
            "feasible": self.feasible,
            "violations": [dict(v.as_dict(), node=lab(v.node)) for v in self.violations],
            "targets_before": {str(lab(t)): m.as_dict() for t, m in self.metrics_before.items()},
            "targets_after": {str(lab(t)): m.as_dict() for t, m in self.metrics_after.items()},
            "diagnostics": self.diagnostics,
        }


# audit -----------------------------------------------------------------------

def _matrix(n: int, edges: Iterable[tuple[int, int]]) -> sp.csr_matrix:
    e = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
    rows = np.concatenate([e[:, 0], e[:, 1]])
    cols = np.concatenate([e[:, 1], e[:, 0]])
    A = sp.csr_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(n, n))
    A.sum_duplicates()
    A.data[:] = 1
    return A


def triangle_and_degree(n: int, edges: Iterable[tuple[int, int]]) -> tuple[np.ndarray, np.ndarray]:
    """``(n_v, d_v)`` arrays via sparse ``diag(A^3)/2``; shares nothing with :class:`Graph` caches."""
    A = _matrix(n, edges)
    deg = np.asarray(A.sum(axis=1)).ravel()
    tri = np.asarray((A @ A).multiply(A).sum(axis=1)).ravel() // 2
    return tri.astype(np.int64), deg.astype(np.int64)


def _lcc_from(tri: np.ndarray, deg: np.ndarray) -> np.ndarray:
    denom = deg * (deg - 1) / 2.0
    out = np.zeros(len(deg))
    np.divide(tri.astype(np.float64), denom, out=out, where=denom > 0)
    return out


def _exact(tri: np.ndarray, deg: np.ndarray, v: int) -> Fraction:
    d = int(deg[v])
    return Fraction(int(tri[v]), d * (d - 1) // 2) if d >= 2 else Fraction(0)


def audit(graph: Graph, edges: Sequence[tuple[int, int]], targets: Sequence[int],
          config: SolverConfig, with_centrality: bool = True):
    """Recompute everything on ``G`` and ``G + F`` from the raw edge lists.

    Returns ``(before, after, violations, objective_before, objective_exact)``
    where the objective is the maximum LCC over ``targets``.
    """
    n = graph.num_nodes
    base_edges = list(graph.edges())
    seen = set(base_edges)
    for u, v in edges:
        if u == v:
            raise ValueError(f"self-loop ({u}, {v}) in plan")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValueError(f"edge {key} duplicated or already present")
        seen.add(key)
    new_edges = base_edges + [(min(u, v), max(u, v)) for u, v in edges]
    tri0, deg0 = triangle_and_degree(n, base_edges)
    tri1, deg1 = triangle_and_degree(n, new_edges)
    l0, l1 = _lcc_from(tri0, deg0), _lcc_from(tri1, deg1)

    if with_centrality and n:
        snap0 = centrality(graph, config.centrality_mode)
        g1 = Graph(n, new_edges)
        snap1 = centrality(g1, config.centrality_mode)
        b0, c0, b1, c1 = snap0.betweenness, snap0.closeness, snap1.betweenness, snap1.closeness
    else:
        b0 = c0 = b1 = c1 = np.full(n, np.nan)

    before = {t: NodeMetrics(float(l0[t]), int(deg0[t]), float(b0[t]), float(c0[t])) for t in targets}
    after = {t: NodeMetrics(float(l1[t]), int(deg1[t]), float(b1[t]), float(c1[t])) for t in targets}

    violations: list[Violation] = []
    rise = l1 - l0
    for v in np.flatnonzero(rise > config.tau + TAU_EPS):
        violations.append(Violation("tau", int(v), float(rise[v] - config.tau)))
    for t in targets:
        m = after[t]
        if with_centrality and m.betweenness < config.omega_b:
            violations.append(Violation("omega_b", t, config.omega_b - m.betweenness))
        if with_centrality and m.closeness < config.omega_c:
            violations.append(Violation("omega_c", t, config.omega_c - m.closeness))
        floor = config.degree_floor(graph, t)
        if m.degree < floor:
            violations.append(Violation("omega_d", t, float(floor - m.degree)))

    obj_before = max((float(l0[t]) for t in targets), default=0.0)
    obj_exact = max((_exact(tri1, deg1, t) for t in targets), default=Fraction(0))
    return before, after, violations, obj_before, obj_exact


def make_plan(algorithm: str, graph: Graph, edges: Sequence[tuple[int, int]], targets: Sequence[int],
              config: SolverConfig, diagnostics: dict | None = None,
              with_centrality: bool = True) -> InterventionPlan:
    edges = [(int(u), int(v)) for u, v in edges]
    before, after, violations, obj_before, obj_exact = audit(graph, edges, targets, config,
                                                             with_centrality)
    return InterventionPlan(
        algorithm=algorithm,
        edges=edges,
        targets=list(targets),
        objective=float(obj_exact),
        objective_exact=obj_exact,
        objective_before=obj_before,
        metrics_before=before,
        metrics_after=after,
        violations=violations,
        diagnostics=diagnostics or {},
    )
