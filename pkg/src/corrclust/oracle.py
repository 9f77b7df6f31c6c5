"""Ground-truth optimum by exhaustive set-partition search, plus a cheap
bad-triangle packing lower bound for instances too large to enumerate."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SizeLimitError
from .graph import Clustering, Graph, enumerate_bad_triangles

MAX_EXACT_N = 12  # Bell(12) ~ 4.2e6 partitions


@dataclass
class OptResult:
    cost: int
    clustering: Clustering
    partitions_examined: int


def brute_force_opt(g: Graph) -> OptResult:
    """Exact minimum disagreement cost over all set partitions.

    Enumerates partitions in restricted-growth order (vertex i may open a
    new block or join any block of vertices < i), carrying the cost
    increment of each placement down the recursion.
    """
    n = g.n
    if n > MAX_EXACT_N:
        raise SizeLimitError(f"exact search limited to n <= {MAX_EXACT_N}, got {n}")
    if n == 0:
        return OptResult(0, Clustering([]), 1)

    adj_mask = [0] * n
    for u in range(n):
        for v in g.adj[u]:
            adj_mask[u] |= 1 << v

    best_cost = [float("inf")]
    best_assign = [None]
    examined = [0]
    assign = [0] * n
    blocks: list[int] = []  # bitmask per block

    def place(i: int, placed: int, cost: int) -> None:
        if i == n:
            examined[0] += 1
            if cost < best_cost[0]:
                best_cost[0] = cost
                best_assign[0] = assign.copy()
            return
        a = adj_mask[i]
        deg_placed = bin(a & placed).count("1")
        for b, mask in enumerate(blocks):
            inblock = bin(a & mask).count("1")
            size = bin(mask).count("1")
            delta = (size - inblock) + (deg_placed - inblock)
            assign[i] = b
            blocks[b] = mask | (1 << i)
            place(i + 1, placed | (1 << i), cost + delta)
            blocks[b] = mask
        assign[i] = len(blocks)
        blocks.append(1 << i)
        place(i + 1, placed | (1 << i), cost + deg_placed)
        blocks.pop()

    place(0, 0, 0)
    return OptResult(
        cost=int(best_cost[0]),
        clustering=Clustering(best_assign[0]),
        partitions_examined=examined[0],
    )


def triangle_packing_lower_bound(g: Graph) -> int:
    """Size of a greedy pair-disjoint bad-triangle packing; always <= opt.

    Triangles are taken in canonical order, skipping any whose three pairs
    intersect an already-taken triangle, so the result is deterministic.
    """
    used: set[tuple[int, int]] = set()
    count = 0
    for a, b, c in enumerate_bad_triangles(g):
        pairs = ((a, b), (a, c), (b, c))
        if any(p in used for p in pairs):
            continue
        used.update(pairs)
        count += 1
    return count
