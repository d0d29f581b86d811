from __future__ import annotations

import gzip
import io
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from netintervene.graph import (EdgeListParseError, Graph, GraphValidationError, UnknownNodeError,
                                compute_all_triangle_counts, dump_edge_list, gnp_random_graph, lcc,
                                load_edge_list)


def complete(n):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def test_load_triangle():
    g = load_edge_list("0 1\n1 2\n2 0\n")
    assert g.num_nodes == 3 and g.num_edges == 3
    assert all(g.lcc(v) == 1.0 for v in g.nodes())


def test_duplicate_and_reversed_lines_collapse():
    g = load_edge_list("0 1\n1 0\n0 1\n")
    assert g.num_edges == 1


def test_self_loop_rejected():
    with pytest.raises(GraphValidationError):
        load_edge_list("0 0\n")


def test_malformed_line_reports_line_number():
    with pytest.raises(EdgeListParseError) as err:
        load_edge_list("# header\n0 1\n1 x\n")
    assert err.value.lineno == 3


def test_comments_and_labels_remapped():
    g = load_edge_list("# snap header\n% other\n10 30\n30 20\n")
    assert g.labels == [10, 20, 30]
    assert g.has_edge(0, 2) and g.has_edge(1, 2)


def test_load_from_path_gz_and_stream(tmp_path):
    text = "1 2\n2 3\n3 1\n3 4\n"
    p = tmp_path / "g.txt"
    p.write_text(text)
    gz = tmp_path / "g.txt.gz"
    with gzip.open(gz, "wt") as fh:
        fh.write(text)
    a, b, c = load_edge_list(str(p)), load_edge_list(gz), load_edge_list(io.StringIO(text))
    assert a == b == c
    assert a.num_edges == 4


def test_round_trip():
    g = gnp_random_graph(40, 0.15, seed=3)
    assert load_edge_list(dump_edge_list(g), extra_nodes=range(40)) == g


def test_lcc_triangle_and_star():
    assert lcc(complete(3), 0) == 1.0
    star = Graph(5, [(0, i) for i in range(1, 5)])
    assert star.lcc(0) == 0.0
    assert star.lcc(1) == 0.0  # degree 1


def test_unknown_node():
    with pytest.raises(UnknownNodeError):
        Graph(3).lcc(5)


def test_triangle_counts_k4_and_path():
    assert compute_all_triangle_counts(complete(4)) == [3, 3, 3, 3]
    assert compute_all_triangle_counts(Graph(4, [(0, 1), (1, 2), (2, 3)])) == [0, 0, 0, 0]


@pytest.mark.parametrize("seed", range(5))
def test_triangle_counts_match_pairwise(seed):
    g = gnp_random_graph(100, 0.1, seed=seed)
    adj = oracles.adjacency(100, g.edges())
    counts = compute_all_triangle_counts(g)
    for v in g.nodes():
        links, pairs = oracles.lcc_pair(adj, v)
        assert counts[v] == links
        assert g.lcc_pair(v) == (links, pairs)
        assert g.lcc_fraction(v) == oracles.lcc_fraction(adj, v)


def test_add_edge_without_common_neighbours_changes_endpoints_only():
    g = Graph(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])
    eff = g.add_edge(0, 3)
    assert set(eff.changed) == {0, 3}
    assert eff.affected[0] == ((1, 2), (1, 3))
    assert g.lcc(0) == pytest.approx(1 / 3)


def test_add_edge_rejects_existing_and_self_loop():
    g = Graph(3, [(0, 1)])
    with pytest.raises(GraphValidationError):
        g.add_edge(1, 0)
    with pytest.raises(GraphValidationError):
        g.add_edge(2, 2)
    with pytest.raises(GraphValidationError):
        g.lcc_if_added(0, 1)


def test_bystander_rises_while_endpoint_falls():
    # B has neighbours A, C, D with A-C linked; adding B-E where C is common
    g = Graph(5, [(0, 1), (1, 2), (0, 2), (1, 3), (2, 4), (2, 3)])
    before = [g.lcc_fraction(v) for v in g.nodes()]
    eff = g.add_edge(1, 4)
    assert g.lcc_fraction(1) < before[1]
    assert g.lcc_fraction(2) > before[2]
    assert set(eff.changed) <= {1, 4} | set(eff.common)


def test_locality_over_random_insertions():
    rng = random.Random(0)
    g = gnp_random_graph(60, 0.15, seed=1)
    n = g.num_nodes
    edges = list(g.edges())
    for _ in range(200):
        while True:
            u, v = rng.sample(range(n), 2)
            if not g.has_edge(u, v):
                break
        before = oracles.all_lcc(n, edges)
        common = g.common_neighbors(u, v)
        eff = g.add_edge(u, v)
        edges.append((u, v))
        after = oracles.all_lcc(n, edges)
        assert [g.lcc_fraction(x) for x in range(n)] == after
        moved = {x for x in range(n) if before[x] != after[x]}
        assert moved == set(eff.changed)
        assert moved <= {u, v} | common
        assert set(eff.affected) == {u, v} | common


def test_lcc_if_added_is_pure_and_matches_clone():
    rng = random.Random(1)
    g = gnp_random_graph(30, 0.2, seed=2)
    snapshot = g.copy()
    for _ in range(500):
        u, v = rng.sample(range(30), 2)
        if g.has_edge(u, v):
            continue
        a = g.lcc_if_added(u, v)
        b = g.lcc_if_added(u, v)
        assert a == b
        clone = g.copy()
        assert clone.add_edge(u, v) == a
        assert g == snapshot
        assert g.triangle_counts() == snapshot.triangle_counts()


def test_distance_three_pair_touches_only_endpoints():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    assert set(g.lcc_if_added(0, 3).affected) == {0, 3}


def test_lcc_array_and_adjacency_matrix():
    g = gnp_random_graph(25, 0.3, seed=4)
    A = g.adjacency_matrix().toarray()
    assert (A == A.T).all() and A.trace() == 0
    assert A.sum() == 2 * g.num_edges
    assert np.allclose(g.lcc_array(), [float(x) for x in oracles.all_lcc(25, g.edges())])


def test_lcc_fraction_is_exact():
    g = Graph(4, [(0, 1), (0, 2), (0, 3), (1, 2)])
    assert g.lcc_fraction(0) == Fraction(1, 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 14).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=40))))
def test_invariants_under_random_construction(case):
    n, pairs = case
    g = Graph(n)
    edges = []
    for u, v in pairs:
        if u != v and not g.has_edge(u, v):
            g.add_edge(u, v)
            edges.append((u, v))
    assert g.num_edges == sum(g.degree(v) for v in g.nodes()) // 2 == len(edges)
    for v in g.nodes():
        assert v not in g.neighbors(v)
        assert all(v in g.neighbors(w) for w in g.neighbors(v))
        assert 0.0 <= g.lcc(v) <= 1.0
    assert g.triangle_counts() == compute_all_triangle_counts(g)
    assert [g.lcc_fraction(v) for v in g.nodes()] == oracles.all_lcc(n, edges)
