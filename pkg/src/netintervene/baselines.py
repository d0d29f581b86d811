"""Competitor heuristics and the exhaustive oracle.

BUM and SIM are the greedy multi-target heuristics the OISA solver is judged
against.  ENUM enumerates edge subsets.  EA, TEA and GD are simplified
re-implementations of closeness- and PageRank-driven edge augmentation; they
carry no LCC filtering, so their plans report any degradation in the audit.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .centrality import centrality, pagerank_influence
from .crpd import miss_argmax, miss_weights, tau_violation
from .graph import Graph, lcc_exact
from .plan import TAU_EPS, ConfigError, InterventionPlan, SolverConfig, make_plan

ENUM_CAP = 10**7


class EnumerationTooLarge(RuntimeError):
    def __init__(self, candidates: int, k: int, subsets: int, cap: int) -> None:
        super().__init__(f"{subsets} subsets of {candidates} candidate edges (k={k}) exceed cap {cap}")
        self.candidates = candidates
        self.k = k
        self.subsets = subsets
        self.cap = cap


def _targets(graph: Graph, T) -> list[int]:
    T = sorted({int(t) for t in T})
    if not T:
        raise ConfigError("target set is empty")
    for t in T:
        graph.degree(t)
    return T


def _needs_miss(config: SolverConfig, snap, m: int) -> tuple[float, float]:
    if snap is None:
        return (0.0, 0.0)
    return miss_weights(float(snap.betweenness[m]), float(snap.closeness[m]), config.omega_b,
                        config.omega_c, config.miss_mode, config.miss_weights)


def _greedy_pairing(name: str, graph: Graph, T, config: SolverConfig, rank, restrict_to_targets: bool):
    T = _targets(graph, T)
    if config.k == 0:
        return make_plan(name, graph, [], T, config)
    base = graph.lcc_array()
    work = graph.copy()
    orig_snap = centrality(graph, config.centrality_mode) if config.needs_centrality() else None
    snap = orig_snap
    F: list[tuple[int, int]] = []
    universe = T if restrict_to_targets else list(graph.nodes())
    stop = "budget"
    for _ in range(config.k):
        m = min(T, key=lambda v: (-work.lcc_fraction(v), v))
        nbrs = work.neighbors(m)
        pool = [u for u in universe if u != m and u not in nbrs
                and tau_violation(work, m, u, base, config.tau) is None]
        if not pool:
            stop = "exhausted"
            break
        w = _needs_miss(config, snap, m)
        if w != (0.0, 0.0):
            u = miss_argmax(pool, orig_snap, [graph.degree(v) for v in graph.nodes()], w)
        else:
            u = min(pool, key=lambda v: rank(work, m, v))
        work.add_edge(m, u)
        F.append((m, u))
        if orig_snap is not None:
            snap = centrality(work, config.centrality_mode)
    return make_plan(name, graph, F, T, config, {"stop": stop})


def bum(graph: Graph, T, config: SolverConfig, restrict_to_targets: bool = False) -> InterventionPlan:
    """Connect the largest-LCC target to the admissible node of largest LCC, ``k`` times."""
    return _greedy_pairing("bum", graph, T, config,
                           lambda g, m, v: (-g.lcc_fraction(v), v), restrict_to_targets)


def _hops_from(g: Graph, src: int) -> dict[int, int]:
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for x in frontier:
            for y in g.neighbors(x):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    nxt.append(y)
        frontier = nxt
    return dist


def sim(graph: Graph, T, config: SolverConfig, restrict_to_targets: bool = True) -> InterventionPlan:
    """Connect the largest-LCC target to the admissible target farthest away in hops."""
    cache: dict = {}

    def rank(g, m, v):
        key = (m, g.num_edges)
        if key not in cache:
            cache.clear()
            cache[key] = _hops_from(g, m)
        d = cache[key].get(v, math.inf)
        return (-d, v)

    return _greedy_pairing("sim", graph, T, config, rank, restrict_to_targets)


# exhaustive search ------------------------------------------------------------

def _subset_count(c: int, sizes) -> int:
    return sum(math.comb(c, s) for s in sizes)


def _evaluate(graph: Graph, base: np.ndarray, subset, targets, tau: float):
    """``(tau_ok, objective, work)`` for ``graph + subset``."""
    work = graph.copy()
    touched = set()
    for u, v in subset:
        eff = work.add_edge(u, v)
        touched.update(eff.affected)
    for x in touched:
        if work.lcc(x) - base[x] > tau + TAU_EPS:
            return False, None, work
    obj = max(lcc_exact(work.triangles(t), work.degree(t)) for t in targets)
    return True, obj, work


def _enumerate(name: str, graph: Graph, targets: list[int], candidates: list[tuple[int, int]],
               config: SolverConfig, sizes: str, cap: int) -> InterventionPlan:
    k = config.k
    if sizes not in ("exact", "at_most"):
        raise ConfigError(f"unknown ENUM size mode {sizes!r}")
    top = min(k, len(candidates))
    order = list(range(top, -1, -1)) if sizes == "exact" else list(range(0, top + 1))
    total = _subset_count(len(candidates), order)
    if total > cap:
        raise EnumerationTooLarge(len(candidates), k, total, cap)
    base = graph.lcc_array()
    degree_floor = {t: config.degree_floor(graph, t) for t in targets}
    audit_each = config.omega_b > 0 or config.omega_c > 0
    best = None
    best_size = None
    evaluated = 0
    for size in order:
        for subset in itertools.combinations(candidates, size):
            evaluated += 1
            ok, obj, work = _evaluate(graph, base, subset, targets, config.tau)
            if not ok:
                continue
            if audit_each:
                # betweenness/closeness floors need a full audit of the subset
                short = not make_plan(name, graph, list(subset), targets, config).feasible
            else:
                short = any(work.degree(t) < degree_floor[t] for t in targets)
            # combinations() yields lexicographic order, so the first of equal keys wins;
            # on equal objective a larger F is preferred
            key = (short, obj, -size)
            if best is None or key < best[0]:
                best = (key, list(subset))
        if sizes == "exact" and best is not None:
            best_size = size
            break
    diag = {"candidates": len(candidates), "subsets_evaluated": evaluated, "size_mode": sizes}
    if best is None:
        diag["status"] = "no tau-feasible subset"
        return make_plan(name, graph, [], targets, config, diag)
    if best_size is not None:
        diag["size"] = best_size
    return make_plan(name, graph, best[1], targets, config, diag)


def enum_s(graph: Graph, t: int, config: SolverConfig, sizes: str = "exact",
           cap: int = ENUM_CAP) -> InterventionPlan:
    """Optimal single-target plan over all edge sets incident to ``t``.

    ``sizes="exact"`` searches ``k``-subsets and only falls back to smaller
    sizes when no ``k``-subset keeps every LCC within ``tau``.
    """
    graph.degree(t)
    nbrs = graph.neighbors(t)
    cands = [(t, v) for v in graph.nodes() if v != t and v not in nbrs]
    return _enumerate("enum_s", graph, [t], cands, config, sizes, cap)


def enum_m(graph: Graph, T, config: SolverConfig, both_in_targets: bool = True,
           sizes: str = "at_most", cap: int = ENUM_CAP) -> InterventionPlan:
    """Optimal multi-target plan minimising the maximum target LCC.

    Candidate edges join two targets, or with ``both_in_targets=False`` any
    target to any node.
    """
    T = _targets(graph, T)
    tset = set(T)
    cands = []
    for u in graph.nodes():
        for v in range(u + 1, graph.num_nodes):
            if graph.has_edge(u, v):
                continue
            if both_in_targets and not (u in tset and v in tset):
                continue
            if not both_in_targets and not (u in tset or v in tset):
                continue
            cands.append((u, v))
    return _enumerate("enum_m", graph, T, cands, config, sizes, cap)


# closeness / influence augmenters --------------------------------------------

def _absent_edges(graph: Graph, incident_to=None, cap: int | None = None) -> list[tuple[int, int]]:
    n = graph.num_nodes
    out = []
    anchors = sorted(incident_to) if incident_to is not None else None
    if anchors is None:
        for u in range(n):
            nb = graph.neighbors(u)
            out.extend((u, v) for v in range(u + 1, n) if v not in nb)
    else:
        seen = set()
        for u in anchors:
            nb = graph.neighbors(u)
            for v in range(n):
                if v != u and v not in nb:
                    e = (min(u, v), max(u, v))
                    if e not in seen:
                        seen.add(e)
                        out.append(e)
        out.sort()
    if cap is not None and len(out) > cap:
        deg = graph.degrees()
        out.sort(key=lambda e: (-int(deg[e[0]]) * int(deg[e[1]]), e))
        out = sorted(out[:cap])
    return out


def _harmonic(dist: np.ndarray) -> np.ndarray:
    inv = np.zeros(dist.shape)
    np.divide(1.0, dist, out=inv, where=np.isfinite(dist) & (dist > 0))
    return inv


def _closeness_greedy(name: str, graph: Graph, T, config: SolverConfig, cap: int | None):
    n = graph.num_nodes
    targets = list(range(n)) if T is None else _targets(graph, T)
    F: list[tuple[int, int]] = []
    if config.k == 0 or n < 2:
        return make_plan(name, graph, F, targets, config)
    work = graph.copy()
    dist = shortest_path(work.adjacency_matrix(), unweighted=True, directed=False)
    rows = np.asarray(targets)
    for _ in range(config.k):
        cands = _absent_edges(work, None if T is None else targets, cap)
        if not cands:
            break
        current = _harmonic(dist[rows]).sum()
        best, best_gain = None, -math.inf
        for a, b in cands:
            # distances after adding (a, b): min over the old path and paths through the new edge
            via = np.minimum(dist[rows, a][:, None] + 1 + dist[b][None, :],
                             dist[rows, b][:, None] + 1 + dist[a][None, :])
            gain = _harmonic(np.minimum(dist[rows], via)).sum() - current
            if gain > best_gain + 1e-12:
                best, best_gain = (a, b), gain
        a, b = best
        work.add_edge(a, b)
        F.append(best)
        dist = np.minimum(dist, np.minimum(dist[:, a][:, None] + 1 + dist[b][None, :],
                                           dist[:, b][:, None] + 1 + dist[a][None, :]))
    return make_plan(name, graph, F, targets, config, {"candidate_cap": cap})


def ea(graph: Graph, config: SolverConfig, cap: int = 10**5) -> InterventionPlan:
    """Greedy absent-edge insertion maximising the summed closeness of all nodes."""
    return _closeness_greedy("ea", graph, None, config, cap)


def tea(graph: Graph, T, config: SolverConfig, cap: int | None = None) -> InterventionPlan:
    """Greedy target-incident insertion maximising the summed closeness of the targets."""
    return _closeness_greedy("tea", graph, T, config, cap)


def gd(graph: Graph, T, config: SolverConfig, damping: float = 0.85) -> InterventionPlan:
    """Greedy target-incident insertion maximising the targets' total PageRank mass."""
    targets = _targets(graph, T)
    F: list[tuple[int, int]] = []
    work = graph.copy()
    rows = np.asarray(targets)
    for _ in range(config.k):
        cands = _absent_edges(work, targets)
        if not cands:
            break
        current = pagerank_influence(work, damping).scores[rows].sum()
        best, best_gain = None, -math.inf
        for a, b in cands:
            trial = work.copy()
            trial.add_edge(a, b)
            gain = pagerank_influence(trial, damping).scores[rows].sum() - current
            if gain > best_gain + 1e-12:
                best, best_gain = (a, b), gain
        work.add_edge(*best)
        F.append(best)
    return make_plan("gd", graph, F, targets, config)
