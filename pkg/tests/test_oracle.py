import numpy as np
import pytest

from boundedconn.errors import ParameterError
from boundedconn.graph import Digraph, random_digraph
from boundedconn.oracle import (
    FlowNetwork,
    all_pairs_oracle,
    edge_connectivity,
    edge_network,
    vertex_connectivity,
    vertex_network,
)
from oracles import brute_edge_connectivity, brute_vertex_connectivity

DIAMOND = Digraph(4, ((0, 1), (1, 3), (0, 2), (2, 3)))
EDGE_PLUS_PATH = Digraph(3, ((0, 2), (0, 1), (1, 2)))


def pairs(n):
    return [(s, t) for s in range(n) for t in range(n) if s != t]


def test_edge_examples():
    g = Digraph(2, ((0, 1),))
    assert edge_connectivity(g, 0, 1) == 1
    assert edge_connectivity(g, 1, 0) == 0
    assert edge_connectivity(Digraph(2, ((0, 1),) * 3), 0, 1) == 3


def test_vertex_examples():
    assert vertex_connectivity(Digraph(2, ((0, 1),)), 0, 1) == 1
    assert vertex_connectivity(DIAMOND, 0, 3) == 2
    assert vertex_connectivity(EDGE_PLUS_PATH, 0, 2) == 2
    assert vertex_connectivity(Digraph(3, ((0, 1), (1, 2))), 2, 0) == 0


def test_vertex_connectivity_counts_parallel_direct_edges():
    g = Digraph(3, ((0, 2), (0, 2), (0, 2), (0, 1), (1, 2)))
    assert vertex_connectivity(g, 0, 2) == 4


def test_same_endpoint_rejected():
    with pytest.raises(ParameterError):
        edge_connectivity(DIAMOND, 1, 1)
    with pytest.raises(ParameterError):
        vertex_connectivity(DIAMOND, 0, 9)


def test_edge_matches_exhaustive_cut_search(rng):
    for _ in range(60):
        n = int(rng.integers(2, 6))
        g = random_digraph(rng, n, int(rng.integers(0, 9)))
        for s, t in pairs(n):
            assert edge_connectivity(g, s, t) == brute_edge_connectivity(n, g.edges, s, t)


def test_vertex_matches_exhaustive_path_packing(rng):
    for _ in range(60):
        n = int(rng.integers(2, 6))
        g = random_digraph(rng, n, int(rng.integers(0, 12)), simple=True)
        for s, t in pairs(n):
            assert vertex_connectivity(g, s, t) == brute_vertex_connectivity(n, g.edges, s, t)


def test_max_flow_equals_min_cut_and_conserves(rng):
    for _ in range(40):
        n = int(rng.integers(2, 8))
        g = random_digraph(rng, n, int(rng.integers(0, 20)))
        s, t = 0, n - 1
        net = edge_network(g)
        value = net.max_flow(s, t)
        side = net.reachable(s)
        assert t not in side
        assert net.cut_capacity(side) == value
        for v in range(n):
            expected = {s: -value, t: value}.get(v, 0)
            assert net.excess(v) == expected


def test_vertex_network_split_structure():
    net, source, sink = vertex_network(DIAMOND, 0, 3)
    assert (source, sink) == (4, 3)
    assert net.max_flow(source, sink) == 2


def test_flow_network_rejects_negative_capacity():
    with pytest.raises(ParameterError):
        FlowNetwork(2).add_arc(0, 1, -1)


def test_edge_connectivity_monotone_under_edge_addition(rng):
    for _ in range(30):
        n = int(rng.integers(2, 7))
        g = random_digraph(rng, n, int(rng.integers(0, 15)))
        extra = random_digraph(rng, n, 1)
        bigger = Digraph(n, g.edges + extra.edges)
        for s, t in pairs(n):
            assert edge_connectivity(bigger, s, t) >= edge_connectivity(g, s, t)


def test_vertex_connectivity_bounded_by_edge_connectivity(rng):
    for _ in range(30):
        n = int(rng.integers(2, 8))
        g = random_digraph(rng, n, int(rng.integers(0, 25)))
        for s, t in pairs(n):
            assert vertex_connectivity(g, s, t) <= edge_connectivity(g, s, t)


def test_all_pairs_examples(rng):
    assert (all_pairs_oracle(Digraph(4, ()), 3).values[~np.eye(4, dtype=bool)] == 0).all()
    g = random_digraph(rng, 5, 12)
    table = all_pairs_oracle(g, 2, "vertex")
    for s, t in pairs(5):
        assert table[s, t] == min(2, vertex_connectivity(g, s, t))
    with pytest.raises(ParameterError):
        all_pairs_oracle(g, 2, "arc")


def test_all_pairs_symmetric_on_bidirected_graphs(rng):
    for _ in range(20):
        n = int(rng.integers(2, 7))
        half = random_digraph(rng, n, int(rng.integers(0, 10)))
        g = Digraph(n, half.edges + tuple((v, u) for u, v in half.edges))
        for mode in ("edge", "vertex"):
            vals = all_pairs_oracle(g, 3, mode).values
            assert (vals == vals.T).all()

