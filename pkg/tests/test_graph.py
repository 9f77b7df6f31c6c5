"""Graph structure, cost evaluation, and bad-triangle enumeration."""

import io
from itertools import combinations

import numpy as np
import pytest

from corrclust import (
    Clustering,
    Graph,
    clustering_cost,
    count_common_and_symdiff,
    enumerate_bad_triangles,
    is_bad_triangle,
    read_edge_list,
    read_update_stream,
    write_edge_list,
    write_update_stream,
)


def complete_graph(n):
    return Graph(n, combinations(range(n), 2))


def test_flip_from_empty():
    g = Graph(3)
    g.flip_edge(0, 1)
    assert g.has_edge(0, 1) and g.has_edge(1, 0)
    assert g.m == 1


def test_flip_is_involution():
    g = Graph(5, [(0, 1), (2, 3)])
    before = g.copy()
    g.flip_edge(0, 4)
    g.flip_edge(0, 4)
    assert g == before


def test_flip_k4_edge_count():
    g = complete_graph(4)
    g.flip_edge(2, 3)
    assert g.m == 5


def test_flip_rejects_self_loop_and_bad_ids():
    g = Graph(4)
    with pytest.raises(ValueError):
        g.flip_edge(2, 2)
    with pytest.raises(ValueError):
        g.flip_edge(0, 4)
    with pytest.raises(ValueError):
        g.flip_edge(-1, 0)


def test_symmetry_after_random_flips():
    rng = np.random.default_rng(3)
    g = Graph(12)
    for _ in range(300):
        u, v = rng.choice(12, size=2, replace=False)
        g.flip_edge(int(u), int(v))
    for u in range(12):
        for v in g.adj[u]:
            assert u in g.adj[v]
            assert v != u


def test_cost_two_triangles_with_bridge():
    g = Graph(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (0, 3)])
    c = Clustering([0, 0, 0, 1, 1, 1])
    assert clustering_cost(g, c) == 1


def test_cost_identities_on_random_graphs():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(2, 12))
        g = Graph(n)
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.4:
                    g.flip_edge(i, j)
        singletons = Clustering(list(range(n)))
        giant = Clustering([0] * n)
        assert clustering_cost(g, singletons) == g.m
        assert clustering_cost(g, giant) == n * (n - 1) // 2 - g.m


def test_cost_requires_total_assignment():
    with pytest.raises(ValueError):
        clustering_cost(Graph(3), Clustering([0, 0]))


def test_bad_triangles_examples():
    assert enumerate_bad_triangles(complete_graph(3)) == []
    assert enumerate_bad_triangles(Graph(3, [(0, 1), (1, 2)])) == [(0, 1, 2)]
    g = complete_graph(4)
    g.flip_edge(2, 3)
    assert enumerate_bad_triangles(g) == [(0, 2, 3), (1, 2, 3)]


def naive_bad_triangles(g):
    out = []
    for a, b, c in combinations(range(g.n), 3):
        if is_bad_triangle(g, a, b, c):
            out.append((a, b, c))
    return out


def test_bad_triangles_match_naive_reference():
    rng = np.random.default_rng(5)
    for trial in range(60):
        n = int(rng.integers(3, 8))
        g = Graph(n)
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.5:
                    g.flip_edge(i, j)
        assert enumerate_bad_triangles(g) == naive_bad_triangles(g)


def test_count_common_and_symdiff_examples():
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    assert count_common_and_symdiff(star, 0, {1, 2}) == (2, 1)
    assert count_common_and_symdiff(Graph(6), 0, {1, 2, 3, 4, 5}) == (0, 5)
    k5 = complete_graph(5)
    assert count_common_and_symdiff(k5, 0, {1, 2, 3, 4}) == (4, 0)


def test_edge_list_round_trip():
    g = Graph(7, [(0, 1), (2, 5), (3, 6), (1, 4)])
    buf = io.StringIO()
    write_edge_list(g, buf)
    buf.seek(0)
    assert read_edge_list(buf) == g


def test_update_stream_round_trip():
    updates = [(0, 1), (3, 4), (0, 1)]
    buf = io.StringIO()
    write_update_stream(updates, buf)
    buf.seek(0)
    assert read_update_stream(buf) == updates


def test_update_stream_rejects_garbage():
    with pytest.raises(ValueError):
        read_update_stream(io.StringIO("G 1 2\n"))
