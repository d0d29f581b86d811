from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from netintervene.graph import Graph, gnp_random_graph
from netintervene.threshold import ThresholdGraphSpec, is_threshold, partition, random_spec, realize


def test_realize_small():
    g = realize(ThresholdGraphSpec((1.0, 2.0, 3.0), 4.0))
    assert list(g.edges()) == [(1, 2)]


def test_equal_weights_complete():
    g = realize(ThresholdGraphSpec((0.5,) * 6, 0.9))
    assert g.num_edges == 15


def test_boundary_equality_is_not_an_edge():
    g = realize(ThresholdGraphSpec((1.0, 1.0), 2.0))
    assert g.num_edges == 0


@pytest.mark.parametrize("seed", range(10))
def test_realize_matches_pairwise(seed):
    spec = random_spec(15, seed)
    g = realize(spec)
    w, t = spec.weights, spec.threshold
    expect = {(i, j) for i, j in itertools.combinations(range(15), 2) if w[i] + w[j] > t}
    assert set(g.edges()) == expect


def test_partition_small():
    part = partition(ThresholdGraphSpec((1.0, 2.0, 3.0), 4.0))
    # 1-based {1}, {2}, {3} -> 0-based
    assert (part.isolated, part.independent, part.clique) == ((0,), (1,), (2,))


def test_partition_complete_and_edgeless():
    full = partition(ThresholdGraphSpec((0.6, 0.7, 0.8, 0.9), 1.0))
    assert full.isolated == () and full.independent == ()
    empty = partition(ThresholdGraphSpec((0.1, 0.2, 0.3, 0.4), 1.0))
    assert len(empty.clique) <= 1
    assert set(empty.isolated) | set(empty.clique) == {0, 1, 2, 3}


def _check_corollary(spec, part):
    """Boundary inequalities with the 1-based ``z`` and ``c`` read against 0-based weights."""
    w, t, n = spec.weights, spec.threshold, spec.n
    z, c = part.z, part.c
    if z > 0:
        assert w[z - 1] + w[n - 1] <= t
    if z < c:
        assert w[z] + w[n - 1] > t  # z is the largest such index
    if c == 0:
        assert w[0] + w[1] > t
    else:
        assert w[c - 2] + w[c - 1] <= t
        if c < n:
            assert t < w[c - 1] + w[c]


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 24), st.integers(0, 2**32 - 1))
def test_partition_properties(n, seed):
    spec = random_spec(n, seed)
    g = realize(spec)
    part = partition(spec, g)
    assert part.isolated + part.independent + part.clique == tuple(range(n))
    for v in part.isolated:
        assert g.degree(v) == 0
    band = part.isolated + part.independent
    assert all(not g.has_edge(a, b) for a, b in itertools.combinations(band, 2))
    assert all(g.has_edge(a, b) for a, b in itertools.combinations(part.clique, 2))
    _check_corollary(spec, part)
    ok, seq = is_threshold(g)
    assert ok and len(seq) == n


def test_unsorted_weights_rejected():
    with pytest.raises(ValueError):
        partition(ThresholdGraphSpec((0.3, 0.1), 0.5))


def test_sorted_constructor_is_stable():
    spec = ThresholdGraphSpec.sorted([0.4, 0.1, 0.4, 0.2], 0.5)
    assert spec.weights == (0.1, 0.2, 0.4, 0.4)


def test_random_spec_deterministic_and_in_range():
    a, b = random_spec(20, 7), random_spec(20, 7)
    assert a == b
    assert list(a.weights) == sorted(a.weights)
    assert 0.5 <= a.threshold <= 1.5
    with pytest.raises(ValueError):
        random_spec(1, 0)


def test_non_finite_weights_rejected():
    with pytest.raises(ValueError):
        ThresholdGraphSpec((0.1, float("nan")), 0.5)


def test_p4_is_not_threshold():
    ok, seq = is_threshold(Graph(4, [(0, 1), (1, 2), (2, 3)]))
    assert not ok and seq == []


def test_creation_sequence_rebuilds_graph():
    spec = random_spec(12, 3)
    g = realize(spec)
    ok, seq = is_threshold(g)
    assert ok
    rebuilt = Graph(12)
    placed = []
    for v, kind in reversed(seq):
        if kind == "d":
            for u in placed:
                rebuilt.add_edge(u, v)
        placed.append(v)
    assert rebuilt == g


def test_recognizer_matches_lp_oracle():
    rng = np.random.default_rng(0)
    agree = positives = 0
    for trial in range(150):
        n = int(rng.integers(2, 9))
        g = gnp_random_graph(n, float(rng.uniform(0.1, 0.9)), seed=rng)
        ok, _ = is_threshold(g)
        assert ok == oracles.is_threshold_lp(n, list(g.edges())), f"trial {trial}"
        agree += 1
        positives += ok
    assert positives > 10 and agree - positives > 10
