"""Single-target intervention: greedy baseline, removed-node reselection and MISS."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .centrality import CentralitySnapshot, centrality
from .graph import Graph, UnknownNodeError, lcc_value
from .plan import TAU_EPS, InterventionPlan, SolverConfig, make_plan


@dataclass
class CandidatePool:
    candidates: set[int]
    removed: dict[int, int] = field(default_factory=dict)  # node -> node whose LCC would break


def tau_violation(work: Graph, a: int, b: int, base_lcc: Sequence[float], tau: float) -> int | None:
    """First node whose LCC would exceed its original value by more than ``tau``
    if ``(a, b)`` were added to ``work``; ``None`` when the edge is admissible."""
    common = work.common_neighbors(a, b)
    c = len(common)
    for x in (a, b):
        d = work.degree(x)
        if lcc_value(work.triangles(x) + c, d + 1) - base_lcc[x] > tau + TAU_EPS:
            return x
    for w in sorted(common):
        if lcc_value(work.triangles(w) + 1, work.degree(w)) - base_lcc[w] > tau + TAU_EPS:
            return w
    return None


def feasible_candidates(work: Graph, t: int, base_lcc: Sequence[float], tau: float,
                        exclude: Iterable[int] = ()) -> CandidatePool:
    """Non-neighbours ``i`` of ``t`` whose edge ``(t, i)`` keeps every LCC within ``tau``
    of the original graph; ``work`` already carries any edges chosen so far."""
    skip = set(exclude)
    nbrs = work.neighbors(t)
    pool = CandidatePool(set())
    for i in work.nodes():
        if i == t or i in nbrs or i in skip:
            continue
        if tau_violation(work, t, i, base_lcc, tau) is None:
            pool.candidates.add(i)
    return pool


# MISS ------------------------------------------------------------------------

def miss_weights(betweenness: float, closeness: float, omega_b: float, omega_c: float,
                 mode: str = "adaptive", static: tuple[float, float] = (0.33, 0.33)) -> tuple[float, float]:
    """Betweenness/closeness weights from the target's shortfall below its floors.

    Each relative deficit is clamped to ``[0, 1]`` and halved, so the degree
    term always keeps weight ``1 - w_b - w_c >= 0``.
    """
    if mode == "static":
        return static
    gb = min(max((omega_b - betweenness) / omega_b, 0.0), 1.0) if omega_b > 0 else 0.0
    gc = min(max((omega_c - closeness) / omega_c, 0.0), 1.0) if omega_c > 0 else 0.0
    return gb / 2.0, gc / 2.0


def _minmax(x: np.ndarray) -> np.ndarray:
    lo, hi = x.min(), x.max()
    if hi - lo <= 0:
        return np.zeros_like(x)
    return (x - lo) / (hi - lo)


def miss_scores(b: np.ndarray, c: np.ndarray, d: np.ndarray, weights: tuple[float, float]) -> np.ndarray:
    """``w_b*b + w_c*c + (1-w_b-w_c)*d`` with each column min-max scaled over the pool."""
    wb, wc = weights
    b, c, d = (_minmax(np.asarray(x, dtype=np.float64)) for x in (b, c, d))
    return wb * b + wc * c + (1.0 - wb - wc) * d


def miss_score(b: float, c: float, d: float, weights: tuple[float, float]) -> float:
    wb, wc = weights
    return wb * b + wc * c + (1.0 - wb - wc) * d


def miss_argmax(pool: Sequence[int], snapshot: CentralitySnapshot, degrees,
                weights: tuple[float, float]) -> int:
    """Pool member with the highest MISS score, ties to the smaller id."""
    nodes = np.asarray(sorted(pool))
    if len(nodes) == 0:
        raise ValueError("empty candidate pool")
    scores = miss_scores(snapshot.betweenness[nodes], snapshot.closeness[nodes],
                         np.asarray([degrees[v] for v in nodes], dtype=np.float64), weights)
    return int(nodes[int(np.argmax(scores))])


# solver ----------------------------------------------------------------------

class _Context:
    """State shared by both greedy runs of one CRPD call."""

    def __init__(self, graph: Graph, t: int, config: SolverConfig) -> None:
        self.graph = graph
        self.t = t
        self.config = config
        self.base_lcc = graph.lcc_array()
        self.use_centrality = config.needs_centrality()
        self.snapshot = centrality(graph, config.centrality_mode) if self.use_centrality else None

    def weights(self, work: Graph, work_snapshot: CentralitySnapshot | None) -> tuple[float, float]:
        cfg = self.config
        if not self.use_centrality:
            return (0.0, 0.0)
        snap = work_snapshot if work_snapshot is not None else self.snapshot
        return miss_weights(float(snap.betweenness[self.t]), float(snap.closeness[self.t]),
                            cfg.omega_b, cfg.omega_c, cfg.miss_mode, cfg.miss_weights)

    def select(self, pool: set[int], weights: tuple[float, float]) -> int:
        g = self.graph
        if weights == (0.0, 0.0):
            return min(pool, key=lambda v: (g.degree(v), v))
        return miss_argmax(pool, self.snapshot, [g.degree(v) for v in range(g.num_nodes)], weights)


def crpd_baseline(graph: Graph, t: int, k: int, seed_F: Sequence[tuple[int, int]] = (),
                  config: SolverConfig | None = None, _ctx: _Context | None = None):
    """Greedy run: pick a candidate, connect it to ``t``, drop candidates that broke.

    Returns ``(F, R)`` where ``R`` maps each removed candidate to the node whose
    LCC bound it would have violated.  ``F`` is shorter than ``k`` when the
    pool runs dry.
    """
    config = config or SolverConfig(k=k)
    ctx = _ctx or _Context(graph, t, config)
    work = graph.copy()
    F: list[tuple[int, int]] = []
    for a, b in seed_F:
        work.add_edge(a, b)
        F.append((a, b))
    seeded = {b if a == t else a for a, b in seed_F}
    pool = feasible_candidates(work, t, ctx.base_lcc, config.tau, exclude=seeded)
    snap = None
    if ctx.use_centrality and seed_F:
        snap = centrality(work, config.centrality_mode)
    while len(F) < k and pool.candidates:
        w = ctx.weights(work, snap)
        u = ctx.select(pool.candidates, w)
        work.add_edge(t, u)
        F.append((t, u))
        pool.candidates.discard(u)
        for i in sorted(pool.candidates):
            bad = tau_violation(work, t, i, ctx.base_lcc, config.tau)
            if bad is not None:
                pool.candidates.discard(i)
                pool.removed[i] = bad
        if ctx.use_centrality:
            snap = centrality(work, config.centrality_mode)
    return F, pool.removed


def _aggregate_miss(ctx: _Context, F: Sequence[tuple[int, int]]) -> float:
    if not F or ctx.snapshot is None:
        return 0.0
    g, t = ctx.graph, ctx.t
    pool = sorted(v for v in g.nodes() if v != t and v not in g.neighbors(t))
    idx = {v: i for i, v in enumerate(pool)}
    nodes = np.asarray(pool)
    scores = miss_scores(ctx.snapshot.betweenness[nodes], ctx.snapshot.closeness[nodes],
                         np.asarray([g.degree(v) for v in pool], dtype=np.float64),
                         ctx.weights(g, None))
    return float(sum(scores[idx[b if a == t else a]] for a, b in F))


def crpd(graph: Graph, t: int, config: SolverConfig, reselect: bool = True) -> InterventionPlan:
    """Best of the plain greedy run and one rerun seeded with the minimum-degree removed node.

    Plans are compared by feasibility, then lower final LCC of ``t``, then
    higher summed MISS score of the chosen endpoints; the first run wins ties.
    """
    if not 0 <= t < graph.num_nodes:
        raise UnknownNodeError(t)
    k = config.k
    if k == 0:
        return make_plan("crpd", graph, [], [t], config, {"runs": []})
    ctx = _Context(graph, t, config)
    F, R = crpd_baseline(graph, t, k, (), config, ctx)
    plan = make_plan("crpd", graph, F, [t], config)
    runs = [{"seed": None, "edges": [list(e) for e in F], "removed": sorted(R)}]
    chosen = 0
    if reselect and R:
        r_m = min(R, key=lambda v: (graph.degree(v), v))
        F2, R2 = crpd_baseline(graph, t, k, [(t, r_m)], config, ctx)
        alt = make_plan("crpd", graph, F2, [t], config)
        runs.append({"seed": r_m, "edges": [list(e) for e in F2], "removed": sorted(R2)})
        key = (not plan.feasible, plan.objective_exact, -_aggregate_miss(ctx, F))
        key2 = (not alt.feasible, alt.objective_exact, -_aggregate_miss(ctx, F2))
        if key2 < key:
            plan, chosen = alt, 1
    plan.diagnostics = {"runs": runs, "chosen_run": chosen}
    return plan
