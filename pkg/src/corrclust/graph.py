"""Dynamic undirected simple graph over a fixed vertex universe.

Vertices are ids 0..n-1.  An edge means the pair is labeled "similar";
non-edges are implicit (the labeling is complete).  The only structural
update is an edge flip.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator, TextIO

from sortedcontainers import SortedSet


class Graph:
    """Symmetric adjacency over n fixed vertices, stored as ordered neighbor sets."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self.n = n
        self.adj: list[SortedSet] = [SortedSet() for _ in range(n)]
        self._m = 0
        for u, v in edges:
            if not self.has_edge(u, v):
                self.flip_edge(u, v)

    def _check_pair(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"self-loop ({u},{v}) not allowed")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"vertex pair ({u},{v}) out of range for n={self.n}")

    @property
    def m(self) -> int:
        return self._m

    def has_edge(self, u: int, v: int) -> bool:
        self._check_pair(u, v)
        return v in self.adj[u]

    def flip_edge(self, u: int, v: int) -> None:
        """Toggle the label of pair (u, v); present becomes absent and vice versa."""
        self._check_pair(u, v)
        if v in self.adj[u]:
            self.adj[u].remove(v)
            self.adj[v].remove(u)
            self._m -= 1
        else:
            self.adj[u].add(v)
            self.adj[v].add(u)
            self._m += 1

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> SortedSet:
        return self.adj[v]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def copy(self) -> "Graph":
        g = Graph(self.n)
        for v in range(self.n):
            g.adj[v] = SortedSet(self.adj[v])
        g._m = self._m
        return g

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and all(
            set(a) == set(b) for a, b in zip(self.adj, other.adj)
        )

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self._m})"


class Clustering:
    """A total partition of the vertices, stored as a per-vertex cluster id."""

    def __init__(self, assignment: list[int]):
        self.assignment = list(assignment)

    def __len__(self) -> int:
        return len(self.assignment)

    def __getitem__(self, v: int) -> int:
        return self.assignment[v]

    def clusters(self) -> dict[int, set[int]]:
        out: dict[int, set[int]] = {}
        for v, c in enumerate(self.assignment):
            out.setdefault(c, set()).add(v)
        return out

    def as_partition(self) -> frozenset[frozenset[int]]:
        """Canonical label-free form, for comparing clusterings."""
        return frozenset(frozenset(s) for s in self.clusters().values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Clustering):
            return NotImplemented
        return self.as_partition() == other.as_partition()


def clustering_cost(g: Graph, c: Clustering) -> int:
    """Disagreements: non-edges inside clusters plus edges across clusters.

    Computed as |E| + (pairs inside clusters) - 2 * (edges inside clusters).
    """
    if len(c) != g.n:
        raise ValueError("clustering must assign all vertices")
    intra_pairs = 0
    intra_edges = 0
    for members in c.clusters().values():
        s = len(members)
        intra_pairs += s * (s - 1) // 2
        for v in members:
            intra_edges += len(g.adj[v] & members)
    intra_edges //= 2
    return g.m + intra_pairs - 2 * intra_edges


def is_bad_triangle(g: Graph, a: int, b: int, c: int) -> bool:
    """True iff exactly two of the three pairs are edges."""
    return (g.has_edge(a, b) + g.has_edge(a, c) + g.has_edge(b, c)) == 2


def enumerate_bad_triangles(g: Graph) -> list[tuple[int, int, int]]:
    """All vertex triples with exactly two edges among them, in canonical order.

    Every bad triangle has a vertex adjacent to the other two (the apex),
    so it suffices to scan non-adjacent neighbor pairs of each vertex.
    """
    out = set()
    for v in range(g.n):
        nbrs = g.adj[v]
        for a, b in combinations(nbrs, 2):
            if not g.has_edge(a, b):
                out.add(tuple(sorted((v, a, b))))
    return sorted(out)


def count_common_and_symdiff(g: Graph, u: int, S: set[int]) -> tuple[int, int]:
    """(|N(u) & S|, |N(u) ^ S|) against the current graph."""
    nbrs = set(g.adj[u])
    inter = len(nbrs & S)
    return inter, len(nbrs) + len(S) - 2 * inter


def write_edge_list(g: Graph, fh: TextIO) -> None:
    """First line `n m`, then one `u v` line per edge with u < v."""
    fh.write(f"{g.n} {g.m}\n")
    for u, v in g.edges():
        fh.write(f"{u} {v}\n")


def read_edge_list(fh: TextIO) -> Graph:
    header = fh.readline().split()
    if len(header) != 2:
        raise ValueError("edge list must start with a `n m` line")
    n, m = int(header[0]), int(header[1])
    g = Graph(n)
    for _ in range(m):
        u, v = map(int, fh.readline().split())
        g.flip_edge(u, v)
    if g.m != m:
        raise ValueError("duplicate edges in edge list")
    return g


def write_update_stream(updates: Iterable[tuple[int, int]], fh: TextIO) -> None:
    """One `F u v` line per flip."""
    for u, v in updates:
        fh.write(f"F {u} {v}\n")


def read_update_stream(fh: TextIO) -> list[tuple[int, int]]:
    out = []
    for line in fh:
        parts = line.split()
        if not parts:
            continue
        if parts[0] != "F" or len(parts) != 3:
            raise ValueError(f"bad update line: {line!r}")
        out.append((int(parts[1]), int(parts[2])))
    return out
