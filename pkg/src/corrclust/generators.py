"""Instance families and update-stream generation for experiments."""

from __future__ import annotations

import numpy as np

from .graph import Graph


def gen_two_cliques(half: int) -> Graph:
    """Two disjoint cliques of `half` vertices each, bridged by edge (0, half)."""
    if half < 2:
        raise ValueError("half must be >= 2")
    g = Graph(2 * half)
    for base in (0, half):
        for i in range(base, base + half):
            for j in range(i + 1, base + half):
                g.flip_edge(i, j)
    g.flip_edge(0, half)
    return g


def gen_complete_minus_edge(n: int) -> Graph:
    """Complete graph with the single pair (0, 1) left dissimilar."""
    if n < 2:
        raise ValueError("n must be >= 2")
    g = Graph(n)
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) != (0, 1):
                g.flip_edge(i, j)
    return g


def gen_complete_bipartite(n1: int, n2: int) -> Graph:
    """All cross pairs between parts of size n1 and n2 are edges."""
    if n1 < 1 or n2 < 1:
        raise ValueError("part sizes must be >= 1")
    g = Graph(n1 + n2)
    for i in range(n1):
        for j in range(n1, n1 + n2):
            g.flip_edge(i, j)
    return g


def gen_er(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi graph: each pair is an edge independently with probability p."""
    if not 0 <= p <= 1:
        raise ValueError("p must be in [0, 1]")
    rng = np.random.default_rng(np.uint64(seed & 0xFFFFFFFFFFFFFFFF))
    g = Graph(n)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                g.flip_edge(i, j)
    return g


def gen_flip_stream(
    n: int, length: int, seed: int, bias: float = 0.5, start: Graph | None = None
) -> list[tuple[int, int]]:
    """Deterministic sequence of pair flips.

    `bias` is the probability of targeting a currently-absent pair (an
    insert) at each step, given the simulated graph state; when the
    preferred kind has no pairs left the other kind is used.
    """
    if length < 0:
        raise ValueError("length must be >= 0")
    if not 0 <= bias <= 1:
        raise ValueError("bias must be in [0, 1]")
    rng = np.random.default_rng(np.uint64(seed & 0xFFFFFFFFFFFFFFFF))
    sim = start.copy() if start is not None else Graph(n)
    total_pairs = n * (n - 1) // 2
    stream = []
    for _ in range(length):
        want_insert = rng.random() < bias
        if sim.m == 0:
            want_insert = True
        elif sim.m == total_pairs:
            want_insert = False
        while True:
            u = int(rng.integers(n))
            v = int(rng.integers(n))
            if u == v:
                continue
            if sim.has_edge(u, v) != want_insert:
                break
        u, v = min(u, v), max(u, v)
        sim.flip_edge(u, v)
        stream.append((u, v))
    return stream
