import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from p6color.graph_core import (Graph, bipartition, bipartition_mask, bits, components, find_induced_path,
                                format_edge_list, is_pt_free, mask_of, parse_edge_list)


def is_induced_path(g, seq):
    if len(set(seq)) != len(seq):
        return False
    for a, b in itertools.combinations(range(len(seq)), 2):
        if g.adjacent(seq[a], seq[b]) != (b == a + 1):
            return False
    return True


def has_induced_path_by_tuples(g, t):
    """Every ordered t-tuple of distinct vertices."""
    return any(is_induced_path(g, seq) for seq in itertools.permutations(range(g.n), t))


def has_induced_path_by_subsets(g, t):
    """A t-subset inducing a connected graph with t-1 edges and max degree 2."""
    for sub in itertools.combinations(range(g.n), t):
        m = mask_of(sub)
        degs = [bin(g.adj[v] & m).count("1") for v in sub]
        if sum(degs) != 2 * (t - 1) or max(degs, default=0) > 2:
            continue
        seen, stack = {sub[0]}, [sub[0]]
        while stack:
            v = stack.pop()
            for u in bits(g.adj[v] & m):
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) == t:
            return True
    return False


def random_graph(rng, n, p):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def graphs_graph(draw_n=st.integers(0, 9)):
    @st.composite
    def build(draw):
        n = draw(draw_n)
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
        return Graph(n, [e for e, keep in zip(pairs, chosen) if keep])
    return build()


@pytest.mark.parametrize("n,t,expect", [
    (6, 6, True),   # a path on six vertices is itself a P6
    (5, 6, False),
    (7, 6, True),
])
def test_paths(n, t, expect):
    g = Graph(n, [(i, i + 1) for i in range(n - 1)])
    assert (find_induced_path(g, t) is not None) == expect


def test_cycles():
    c6 = Graph(6, [(i, (i + 1) % 6) for i in range(6)])
    assert is_pt_free(c6, 6)
    assert find_induced_path(c6, 5) == [0, 1, 2, 3, 4]
    c7 = Graph(7, [(i, (i + 1) % 7) for i in range(7)])
    assert not is_pt_free(c7, 6)


def test_within_restricts_search():
    g = Graph(7, [(i, i + 1) for i in range(6)])
    assert find_induced_path(g, 6, within=range(6)) == [0, 1, 2, 3, 4, 5]
    assert find_induced_path(g, 6, within=[0, 1, 2, 4, 5, 6]) is None


def test_smallest_sequence_returned():
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert find_induced_path(g, 3) == [0, 1, 2]


@pytest.mark.parametrize("t", [1, 2, 3, 4, 5])
def test_atlas_all_small_graphs(t):
    for h in nx.graph_atlas_g()[1:]:
        if h.number_of_nodes() > 6:
            continue
        g = Graph(h.number_of_nodes(), list(h.edges()))
        path = find_induced_path(g, t)
        assert (path is not None) == has_induced_path_by_tuples(g, t)
        if path is not None:
            assert is_induced_path(g, path) and len(path) == t


@settings(max_examples=150, deadline=None)
@given(graphs_graph())
def test_found_paths_are_induced(g):
    for t in range(1, 7):
        path = find_induced_path(g, t)
        if path is None:
            assert not has_induced_path_by_subsets(g, t)
        else:
            assert is_induced_path(g, path)


@settings(max_examples=100, deadline=None)
@given(graphs_graph(st.integers(1, 12)))
def test_hereditary(g):
    # deleting a vertex never creates an induced path
    if is_pt_free(g, 5):
        sub, _ = g.induced(range(1, g.n))
        assert is_pt_free(sub, 5)


def test_components_and_bipartition():
    g = Graph(7, [(0, 1), (1, 2), (3, 4), (4, 5), (5, 3)])
    assert components(g) == [[0, 1, 2], [3, 4, 5], [6]]
    assert bipartition(g, [0, 1, 2, 6]) == [([0, 2], [1]), ([6], [])]
    assert bipartition(g) is None
    assert bipartition_mask(g, 0) == []


@settings(max_examples=100, deadline=None)
@given(graphs_graph(st.integers(1, 10)))
def test_bipartition_matches_networkx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    parts = bipartition(g)
    assert (parts is not None) == nx.is_bipartite(h)
    if parts is not None:
        for a, b in parts:
            for side in (a, b):
                assert not any(g.adjacent(u, v) for u, v in itertools.combinations(side, 2))


def test_edge_list_round_trip():
    rng = random.Random(3)
    g = random_graph(rng, 9, 0.4)
    assert parse_edge_list(format_edge_list(g)) == g


@pytest.mark.parametrize("text", ["e 0 1\n", "p 3 1\ne 0 5\n", "p 3 2\ne 0 1\n", "p 2 1\nq\n"])
def test_edge_list_rejects(text):
    with pytest.raises(ValueError):
        parse_edge_list(text)


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 1), (1, 0)], [(0, 3)]])
def test_graph_rejects(edges):
    with pytest.raises(ValueError):
        Graph(3, edges)
