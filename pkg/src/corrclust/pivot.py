"""Rank-driven pivot clustering and its locally-modified variant.

Both algorithms process vertices in increasing pi rank, which is
equivalent to drawing pivots uniformly from the unclustered vertices.
The modified variant additionally ejects low-overlap neighbors of the
pivot to singletons (the D' subsample) and absorbs a capped subsample of
near-twin non-neighbors (the A' subsample).  Subsamples are the
lowest-sigma members, which is a uniform subsample once the tape is drawn
uniformly.

Cluster ids: the cluster built around pivot v gets id v; a singleton for
vertex u gets id n + u.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import TextIO

from .graph import Clustering, Graph
from .tape import Params, RandomTape


def subsample_cap(delta: float, csize: int) -> int:
    """floor(delta * |C_v|), the cap on both the D' and A' subsamples."""
    return math.floor(delta * csize)


def eject_threshold(delta: float, csize: int) -> float:
    """Neighbors u with |N(u) & C_v| <= this join D_v."""
    return delta * csize - 1


def absorb_threshold(epsilon: float, csize: int) -> float:
    """Non-members w with |N(w) ^ C_v| <= this join A_v."""
    return epsilon * csize - 1


@dataclass
class IterationRecord:
    """Everything one pivot iteration decided, plus the pre-iteration A set."""

    pivot: int
    C: frozenset[int]
    D: frozenset[int]
    D_prime: frozenset[int]
    A_v: frozenset[int]
    A_prime: frozenset[int]
    A_before: frozenset[int]
    remaining_size: int

    def to_dict(self) -> dict:
        return {
            "pivot": self.pivot,
            "C": sorted(self.C),
            "D": sorted(self.D),
            "D_prime": sorted(self.D_prime),
            "A_v": sorted(self.A_v),
            "A_prime": sorted(self.A_prime),
            "A_before": sorted(self.A_before),
            "remaining_size": self.remaining_size,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IterationRecord":
        return cls(
            pivot=d["pivot"],
            C=frozenset(d["C"]),
            D=frozenset(d["D"]),
            D_prime=frozenset(d["D_prime"]),
            A_v=frozenset(d["A_v"]),
            A_prime=frozenset(d["A_prime"]),
            A_before=frozenset(d["A_before"]),
            remaining_size=d["remaining_size"],
        )


@dataclass
class ExecutionTrace:
    """Ordered iteration records of one modified-pivot run."""

    n: int
    params: Params
    records: list[IterationRecord] = field(default_factory=list)

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def pivots(self) -> list[int]:
        return [r.pivot for r in self.records]

    def to_json(self, fh: TextIO) -> None:
        doc = {
            "schema": 1,
            "n": self.n,
            "params": {
                "epsilon": self.params.epsilon,
                "delta": self.params.delta,
                "k": self.params.k,
            },
            "records": [r.to_dict() for r in self.records],
        }
        json.dump(doc, fh)

    @classmethod
    def from_json(cls, fh: TextIO) -> "ExecutionTrace":
        doc = json.load(fh)
        params = Params(**doc["params"])
        return cls(
            n=doc["n"],
            params=params,
            records=[IterationRecord.from_dict(d) for d in doc["records"]],
        )


def run_pivot(g: Graph, tape: RandomTape) -> tuple[Clustering, list[int]]:
    """Plain pivot clustering: each pivot grabs all its unclustered neighbors."""
    if tape.n != g.n:
        raise ValueError("tape does not cover all vertices")
    assignment = [-1] * g.n
    pivots = []
    for v in tape.pivot_order():
        if assignment[v] != -1:
            continue
        pivots.append(v)
        assignment[v] = v
        for u in g.adj[v]:
            if assignment[u] == -1:
                assignment[u] = v
    return Clustering(assignment), pivots


def pivot_sets_at(
    g: Graph,
    remaining: set[int],
    v: int,
    A: set[int],
    p: Params,
    tape: RandomTape,
) -> tuple[set[int], set[int], set[int], set[int], set[int]]:
    """The five decision sets of one pivot iteration, against the remaining graph.

    Returns (C_v, D_v, D'_v, A_v, A'_v).  Shared by the static runner, the
    dynamic engine's oracle tests, and the charge auditor.
    """
    if v not in remaining:
        raise ValueError(f"pivot {v} is not in the remaining vertex set")
    C = (set(g.adj[v]) & remaining) | {v}
    csize = len(C)
    cap = subsample_cap(p.delta, csize)

    D: set[int] = set()
    thr_d = eject_threshold(p.delta, csize)
    if thr_d >= 1:  # every u in C has at least v in N(u) & C_v
        for u in C:
            if u != v and len(g.adj[u] & C) <= thr_d:
                D.add(u)
    D_prime = set(sorted(D, key=tape.sigma_key)[: min(len(D), cap)])

    A_v: set[int] = set()
    thr_a = absorb_threshold(p.epsilon, csize)
    if thr_a >= 0:
        for w in remaining:
            if w in C or w in A:
                continue
            inter = len(g.adj[w] & C)
            if csize - inter > thr_a:  # cheap reject: non-neighbors alone exceed it
                continue
            deg_rem = len(g.adj[w] & remaining)
            if deg_rem + csize - 2 * inter <= thr_a:
                A_v.add(w)
    A_prime = set(sorted(A_v, key=tape.sigma_key)[: min(len(A_v), cap)])
    return C, D, D_prime, A_v, A_prime


def run_modified_pivot(
    g: Graph, tape: RandomTape, p: Params
) -> tuple[Clustering, ExecutionTrace]:
    """Modified pivot clustering; returns the clustering and the full trace."""
    if tape.n != g.n:
        raise ValueError("tape does not cover all vertices")
    n = g.n
    assignment = [-1] * n
    remaining = set(range(n))
    A: set[int] = set()
    trace = ExecutionTrace(n=n, params=p)

    for v in tape.pivot_order():
        if v not in remaining:
            continue
        C, D, D_prime, A_v, A_prime = pivot_sets_at(g, remaining, v, A, p, tape)
        trace.records.append(
            IterationRecord(
                pivot=v,
                C=frozenset(C),
                D=frozenset(D),
                D_prime=frozenset(D_prime),
                A_v=frozenset(A_v),
                A_prime=frozenset(A_prime),
                A_before=frozenset(A),
                remaining_size=len(remaining),
            )
        )
        for u in (D_prime - A) | (A_v - A_prime):
            assert assignment[u] == -1
            assignment[u] = n + u
        for u in (C | A_prime) - D_prime - A:
            assert assignment[u] == -1
            assignment[u] = v
        A |= A_v
        remaining -= C

    assert all(c != -1 for c in assignment)
    return Clustering(assignment), trace


def clustering_from_trace(trace: ExecutionTrace) -> Clustering:
    """Rebuild the clustering a trace's run produced."""
    n = trace.n
    assignment = [-1] * n
    for r in trace.records:
        for u in (r.D_prime - r.A_before) | (r.A_v - r.A_prime):
            assignment[u] = n + u
        for u in (r.C | r.A_prime) - r.D_prime - r.A_before:
            assignment[u] = r.pivot
    assert all(c != -1 for c in assignment)
    return Clustering(assignment)
