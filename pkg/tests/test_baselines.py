from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

import oracles
from netintervene.baselines import EnumerationTooLarge, bum, ea, enum_m, enum_s, gd, sim, tea
from netintervene.centrality import pagerank_influence
from netintervene.graph import Graph, gnp_random_graph
from netintervene.plan import SolverConfig

PLAIN = SolverConfig(k=1, tau=0.12, omega_b=0, omega_c=0, omega_d=0)


def two_triangles():
    return Graph(8, [(0, 1), (0, 2), (1, 2), (5, 6), (5, 7), (6, 7)])


@pytest.mark.parametrize("fn", [bum, sim, enum_m])
def test_k_zero_empty(fn):
    g = gnp_random_graph(10, 0.3, seed=0)
    assert fn(g, [0, 1, 2], PLAIN.replace(k=0)).edges == []


def test_forced_pairing():
    g = two_triangles()
    assert bum(g, [0, 5], PLAIN, restrict_to_targets=True).edges == [(0, 5)]
    assert sim(g, [0, 5], PLAIN).edges == [(0, 5)]


def test_bum_reference_trace():
    rng = np.random.default_rng(3)
    for _ in range(10):
        g = gnp_random_graph(18, 0.25, seed=rng)
        T = sorted(sorted(g.nodes(), key=lambda v: (-g.lcc(v), v))[:6])
        cfg = PLAIN.replace(k=3)
        edges = list(g.edges())
        base = [float(x) for x in oracles.all_lcc(18, edges)]
        F = []
        for _ in range(3):
            adj = oracles.adjacency(18, edges + F)
            lcc = {v: oracles.lcc_fraction(adj, v) for v in range(18)}
            m = min(T, key=lambda v: (-lcc[v], v))
            pool = []
            for u in range(18):
                if u == m or u in adj[m]:
                    continue
                after = oracles.all_lcc(18, edges + F + [(m, u)])
                if all(float(a) - b <= 0.12 + 1e-12 for a, b in zip(after, base)):
                    pool.append(u)
            if not pool:
                break
            F.append((m, min(pool, key=lambda v: (-lcc[v], v))))
        assert bum(g, T, cfg).edges == F


def test_sim_prefers_other_component():
    g = Graph(7, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (0, 2)])
    # target 1 has the largest LCC; targets 3 (two hops) and 6 (unreachable)
    assert sim(g, [1, 3, 6], PLAIN).edges == [(1, 6)]


def test_sim_on_path_pairs_endpoints():
    # triangles hung off a path make the path ends the largest-LCC targets
    g = Graph(9, [(i, i + 1) for i in range(6)] + [(0, 7), (1, 7), (6, 8), (5, 8)])
    T = [0, 3, 6]
    plan = sim(g, T, PLAIN.replace(tau=1.0))
    adj = oracles.adjacency(9, g.edges())
    dist, _ = oracles.bfs(adj, plan.edges[0][0])
    far = max((u for u in T if u != plan.edges[0][0]), key=lambda u: (dist.get(u, math.inf), -u))
    assert plan.edges == [(0, 6)] and far == 6


def test_enum_k1_is_linear_scan():
    g = gnp_random_graph(12, 0.3, seed=1)
    t = 0
    edges = list(g.edges())
    best = None
    for v in range(12):
        if v == t or g.has_edge(t, v):
            continue
        if oracles.tau_ok(12, edges, [(t, v)], 0.12):
            val = oracles.all_lcc(12, edges + [(t, v)])[t]
            if best is None or val < best[0]:
                best = (val, (t, v))
    plan = enum_s(g, t, PLAIN)
    assert (plan.objective_exact, plan.edges[0]) == best


@pytest.mark.parametrize("seed", range(3))
def test_enum_m_double_loop(seed):
    g = gnp_random_graph(12, 0.3, seed=seed)
    T = sorted(sorted(g.nodes(), key=lambda v: (-g.lcc(v), v))[:5])
    cfg = PLAIN.replace(k=2)
    edges = list(g.edges())
    cands = [(u, v) for u, v in itertools.combinations(T, 2) if not g.has_edge(u, v)]
    best = oracles.max_lcc(12, edges, T)
    for i in range(len(cands)):
        if oracles.tau_ok(12, edges, [cands[i]], 0.12):
            best = min(best, oracles.max_lcc(12, edges + [cands[i]], T))
        for j in range(i + 1, len(cands)):
            pair = [cands[i], cands[j]]
            if oracles.tau_ok(12, edges, pair, 0.12):
                best = min(best, oracles.max_lcc(12, edges + pair, T))
    assert enum_m(g, T, cfg).objective_exact == best


def test_enum_at_least_one_endpoint_flag():
    g = two_triangles()
    cfg = PLAIN.replace(k=2, tau=1.0)
    both = enum_m(g, [0, 1], cfg)
    loose = enum_m(g, [0, 1], cfg, both_in_targets=False)
    assert both.diagnostics["candidates"] == 0
    assert loose.objective_exact < both.objective_exact


def test_enum_cap():
    g = Graph(40)
    with pytest.raises(EnumerationTooLarge) as err:
        enum_s(g, 0, PLAIN.replace(k=3), cap=1000)
    # the count covers the fallback sizes too
    assert err.value.subsets == sum(math.comb(39, s) for s in range(4))


def test_enum_is_oracle_for_everyone():
    rng = np.random.default_rng(5)
    for _ in range(10):
        g = gnp_random_graph(11, 0.35, seed=rng)
        T = sorted(sorted(g.nodes(), key=lambda v: (-g.lcc(v), v))[:4])
        cfg = PLAIN.replace(k=2)
        best = enum_m(g, T, cfg).objective_exact
        for fn in (bum, sim):
            plan = fn(g, T, cfg, restrict_to_targets=True)
            assert plan.objective_exact >= best


def test_tau_respected_by_bum_and_sim():
    rng = np.random.default_rng(6)
    for _ in range(10):
        g = gnp_random_graph(25, 0.2, seed=rng)
        T = list(range(0, 25, 3))
        for fn in (bum, sim):
            plan = fn(g, T, PLAIN.replace(k=4))
            assert plan.tau_feasible
            assert oracles.tau_ok(25, list(g.edges()), plan.edges, 0.12)


def _closeness_sum(n, edges, rows=None):
    c = oracles.closeness(n, edges)
    return c.sum() if rows is None else c[rows].sum()


def test_ea_star_joins_two_leaves():
    g = Graph(6, [(0, i) for i in range(1, 6)])
    plan = ea(g, PLAIN)
    edges = list(g.edges())
    gains = {}
    for i, j in itertools.combinations(range(6), 2):
        if not g.has_edge(i, j):
            gains[(i, j)] = _closeness_sum(6, edges + [(i, j)])
    top = max(gains.values())
    assert plan.edges == [min(e for e, v in gains.items() if abs(v - top) < 1e-12)]
    assert plan.edges == [(1, 2)]


def test_ea_matches_exhaustive_on_random_graph():
    g = gnp_random_graph(14, 0.15, seed=3)
    edges = list(g.edges())
    scores = {(i, j): _closeness_sum(14, edges + [(i, j)])
              for i, j in itertools.combinations(range(14), 2) if not g.has_edge(i, j)}
    top = max(scores.values())
    assert ea(g, PLAIN).edges == [min(e for e, v in scores.items() if v > top - 1e-12)]


def test_tea_single_target():
    g = gnp_random_graph(15, 0.2, seed=2)
    plan = tea(g, [4], PLAIN.replace(k=3))
    assert all(4 in e for e in plan.edges)
    edges = list(g.edges())
    scores = {tuple(sorted((4, v))): _closeness_sum(15, edges + [(4, v)], [4])
              for v in range(15) if v != 4 and not g.has_edge(4, v)}
    top = max(scores.values())
    assert plan.edges[0] == min(e for e, v in scores.items() if v > top - 1e-12)


@pytest.mark.parametrize("fn", [ea, tea, gd])
def test_augmenters_k_zero(fn):
    g = gnp_random_graph(10, 0.3, seed=0)
    plan = fn(g, PLAIN.replace(k=0)) if fn is ea else fn(g, [0, 1], PLAIN.replace(k=0))
    assert plan.edges == []


def test_gd_cycle_tie_goes_to_smallest_edge():
    g = Graph(6, [(i, (i + 1) % 6) for i in range(6)])
    T = [0, 2, 4]
    plan = gd(g, T, PLAIN)
    edges = list(g.edges())
    gains = {}
    for a in T:
        for v in range(6):
            if v != a and not g.has_edge(a, v):
                e = tuple(sorted((a, v)))
                gains[e] = oracles.pagerank(6, edges + [e])[T].sum()
    top = max(gains.values())
    assert plan.edges == [min(e for e, v in gains.items() if v > top - 1e-9)]


def test_gd_matches_candidate_sweep():
    g = gnp_random_graph(15, 0.2, seed=4)
    T = [1, 5, 9]
    edges = list(g.edges())
    gains = {}
    for a in T:
        for v in range(15):
            if v != a and not g.has_edge(a, v):
                e = tuple(sorted((a, v)))
                gains[e] = oracles.pagerank(15, edges + [e])[T].sum()
    top = max(gains.values())
    plan = gd(g, T, PLAIN)
    assert plan.edges == [min(e for e, v in gains.items() if v > top - 1e-9)]
    assert pagerank_influence(g).scores[T].sum() < top


def test_augmenters_report_tau_damage():
    # closeness-driven edges ignore LCC; the audit still catches any breach
    g = gnp_random_graph(20, 0.25, seed=1)
    plan = ea(g, PLAIN.replace(k=4, tau=0.0))
    ok = oracles.tau_ok(20, list(g.edges()), plan.edges, 0.0)
    assert plan.tau_feasible == ok


def test_ea_candidate_cap_recorded():
    g = gnp_random_graph(30, 0.1, seed=0)
    plan = ea(g, PLAIN, cap=50)
    assert plan.diagnostics["candidate_cap"] == 50 and len(plan.edges) == 1
