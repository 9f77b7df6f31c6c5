"""Charge auditor for modified-pivot runs.

Replays a recorded execution trace (sharing all of the run's randomness),
assigns nonnegative charges to bad triangles, verifies that the total
charge dominates the clustering cost, classifies every mistake into one
of seven structural types, and Monte-Carlo-estimates the expected charge
load per vertex pair.

Charging rules, with the keys used for per-rule totals:

  core_nonedge_full   - non-edge inside C_v, neither endpoint ejected: 1
  core_nonedge_cut    - non-edge inside C_v touching D'_v: 2d/(1-1.5d)
  cut_outside         - edge leaving C_v to an unabsorbed vertex: 1
  absorbed_kept       - edge leaving C_v to a vertex kept by A'_v: d
  absorbed_dropped    - edge leaving C_v to an absorbed-then-dropped vertex: 1+e/(1-e)
  cut_outside_flood   - same as cut_outside, oversized-A_v branch: 1
  absorbed_flood      - edge leaving C_v into an oversized A_v: 1-e/(1-e)
  nonlocal            - pivot-free bad triangle between N(v) and A_v: 5e/(1-e)/(|A_v|-1)

The first five apply when |A_v| <= k|C_v|; the last three when |A_v| > k|C_v|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

import numpy as np

from .errors import ClassificationViolationError, TraceMismatchError
from .graph import Clustering, Graph, clustering_cost, is_bad_triangle
from .pivot import ExecutionTrace, IterationRecord, clustering_from_trace, run_modified_pivot
from .tape import Params, derive_seed, make_tape

LINE_KEYS = (
    "core_nonedge_full",
    "core_nonedge_cut",
    "cut_outside",
    "absorbed_kept",
    "absorbed_dropped",
    "cut_outside_flood",
    "absorbed_flood",
    "nonlocal",
)

Triple = tuple[int, int, int]


@dataclass
class ChargeVector:
    """Sparse map from bad triangles to accumulated nonnegative charges."""

    charges: dict[Triple, float] = field(default_factory=dict)
    # One {rule key: total charge} dict per iteration.
    line_totals: list[dict[str, float]] = field(default_factory=list)

    def add(self, tri: Triple, amount: float, line: str) -> None:
        self.charges[tri] = self.charges.get(tri, 0.0) + amount
        self.line_totals[-1][line] += amount

    def total(self) -> float:
        return sum(self.charges.values())

    def pair_charges(self) -> dict[tuple[int, int], float]:
        """Total charge over triangles containing each unordered pair."""
        out: dict[tuple[int, int], float] = {}
        for (a, b, c), y in self.charges.items():
            for pair in ((a, b), (a, c), (b, c)):
                out[pair] = out.get(pair, 0.0) + y
        return out

    def validate_bad_triangles(self, g: Graph) -> None:
        for a, b, c in self.charges:
            if not is_bad_triangle(g, a, b, c):
                raise TraceMismatchError(f"charged triple ({a},{b},{c}) is not a bad triangle")


def _replay(g: Graph, trace: ExecutionTrace) -> Iterator[tuple[IterationRecord, set[int]]]:
    """Walk the trace, validating it against g, yielding (record, remaining)."""
    if trace.n != g.n:
        raise TraceMismatchError("trace vertex count does not match graph")
    remaining = set(range(g.n))
    A: set[int] = set()
    for r in trace.records:
        if r.pivot not in remaining:
            raise TraceMismatchError(f"pivot {r.pivot} already removed")
        C = (set(g.adj[r.pivot]) & remaining) | {r.pivot}
        if C != set(r.C):
            raise TraceMismatchError(f"C mismatch at pivot {r.pivot}")
        if set(r.A_before) != A:
            raise TraceMismatchError(f"A snapshot mismatch at pivot {r.pivot}")
        yield r, remaining
        A |= r.A_v
        remaining -= r.C
    if remaining:
        raise TraceMismatchError("trace ends with unprocessed vertices")


def _tri(a: int, b: int, c: int) -> Triple:
    return tuple(sorted((a, b, c)))  # type: ignore[return-value]


def compute_charges(g: Graph, trace: ExecutionTrace, p: Params) -> ChargeVector:
    """Replay the trace and emit per-triangle charges."""
    if p != trace.params:
        raise TraceMismatchError("params do not match the trace")
    eps, delta, k = p.epsilon, p.delta, p.k
    cut_rate = 2 * delta / (1 - 1.5 * delta)
    dropped_rate = 1 + eps / (1 - eps)
    flood_rate = 1 - eps / (1 - eps)

    cv = ChargeVector()
    for r, remaining in _replay(g, trace):
        cv.line_totals.append({key: 0.0 for key in LINE_KEYS})
        v, C, Dp, A_v, Ap, A = r.pivot, r.C, r.D_prime, r.A_v, r.A_prime, r.A_before

        for u, w in combinations(sorted(C), 2):
            if not g.has_edge(u, w):
                if u not in Dp and w not in Dp:
                    cv.add(_tri(v, u, w), 1.0, "core_nonedge_full")
                else:
                    cv.add(_tri(v, u, w), cut_rate, "core_nonedge_cut")

        small = len(A_v) <= k * len(C)
        for u in C:
            for w in g.adj[u]:
                if w not in remaining or w in C or w in A:
                    continue
                if small:
                    if w not in A_v:
                        cv.add(_tri(v, u, w), 1.0, "cut_outside")
                    elif w in Ap:
                        cv.add(_tri(v, u, w), delta, "absorbed_kept")
                    else:
                        cv.add(_tri(v, u, w), dropped_rate, "absorbed_dropped")
                else:
                    if w not in A_v:
                        cv.add(_tri(v, u, w), 1.0, "cut_outside_flood")
                    else:
                        cv.add(_tri(v, u, w), flood_rate, "absorbed_flood")

        if not small and len(A_v) >= 2:
            rate = (5 * eps / (1 - eps)) / (len(A_v) - 1)
            inner = C - {v}
            for w, x in combinations(sorted(A_v), 2):
                if g.has_edge(w, x):
                    continue
                for u in g.adj[w] & g.adj[x] & inner:
                    cv.add(_tri(u, w, x), rate, "nonlocal")
    return cv


def verify_charge_dominance(
    g: Graph, trace: ExecutionTrace, charges: ChargeVector
) -> tuple[bool, float]:
    """True iff the total charge covers the cost of the trace's clustering."""
    cost = clustering_cost(g, clustering_from_trace(trace))
    margin = charges.total() - cost
    return margin >= -1e-9, margin


@dataclass
class IterationMistakes:
    pivot: int
    counts: dict[int, int]  # mistake type -> count
    line_totals: dict[str, float]
    flood_branch: bool  # True when |A_v| > k|C_v|


@dataclass
class MistakeReport:
    counts: dict[int, int]
    iterations: list[IterationMistakes]

    def assert_line_inequalities(self) -> None:
        """Per-iteration coverage: each mistake group is paid for by its rules."""
        tol = 1e-9
        for it in self.iterations:
            c, y = it.counts, it.line_totals
            checks = [
                (c[1], y["core_nonedge_full"]),
                (c[2], y["core_nonedge_cut"]),
            ]
            if it.flood_branch:
                checks += [
                    (c[3], y["cut_outside_flood"]),
                    (c[4] + c[5] + c[6] + c[7], y["absorbed_flood"] + y["nonlocal"]),
                ]
            else:
                checks += [
                    (c[3], y["cut_outside"]),
                    (c[4] + c[5], y["absorbed_kept"]),
                    (c[6] + c[7], y["absorbed_dropped"]),
                ]
            for count, charge in checks:
                if count > charge + tol:
                    raise AssertionError(
                        f"iteration at pivot {it.pivot}: {count} mistakes "
                        f"exceed charge {charge}"
                    )


def _mistake_types(
    g: Graph,
    x: int,
    z: int,
    C: frozenset[int],
    Dp: frozenset[int],
    A_v: frozenset[int],
    Ap: frozenset[int],
    A: frozenset[int],
    remaining: set[int],
) -> list[int]:
    """All mistake-type conditions the pair (x, z) satisfies (should be <= 1)."""
    edge = g.has_edge(x, z)
    drop = A_v - Ap
    out = []
    if not edge and x in C and z in C and x not in Dp and z not in Dp:
        out.append(1)
    if edge and ((x in Dp and (z in C or z in Ap)) or (z in Dp and (x in C or x in Ap))):
        out.append(2)
    if edge:
        o3x = x in remaining and x not in C and x not in A_v and x not in A
        o3z = z in remaining and z not in C and z not in A_v and z not in A
        if (x in C and o3z) or (z in C and o3x):
            out.append(3)
    if not edge and x in Ap and z in Ap:
        out.append(4)
    if edge:
        if (x in Ap and z not in C and z not in Ap) or (
            z in Ap and x not in C and x not in Ap
        ):
            out.append(5)
    else:
        if (x in Ap and z in C and z not in Dp) or (z in Ap and x in C and x not in Dp):
            out.append(5)
    if edge and ((x in drop and z in C) or (z in drop and x in C)):
        out.append(6)
    if edge and (
        (x in drop and z not in C and z not in Ap)
        or (z in drop and x not in C and x not in Ap)
    ):
        out.append(7)
    return out


def classify_mistakes(g: Graph, trace: ExecutionTrace) -> MistakeReport:
    """Assign every mistake of every iteration to exactly one of seven types.

    Raises ClassificationViolationError when a mistake matches zero or
    several type conditions, or a non-mistake matches any.
    """
    final = clustering_from_trace(trace)
    charges = compute_charges(g, trace, trace.params)
    totals = {j: 0 for j in range(1, 8)}
    iterations: list[IterationMistakes] = []

    for idx, (r, remaining) in enumerate(_replay(g, trace)):
        v, C, Dp, A_v, Ap, A = r.pivot, r.C, r.D_prime, r.A_v, r.A_prime, r.A_before
        touched = (C | A_v) - A
        counts = {j: 0 for j in range(1, 8)}
        seen = set()
        for x in touched:
            for z in remaining:
                if z == x or z in A:
                    continue
                pair = (x, z) if x < z else (z, x)
                if pair in seen:
                    continue
                seen.add(pair)
                edge = g.has_edge(x, z)
                mistake = (final[x] != final[z]) if edge else (final[x] == final[z])
                types = _mistake_types(g, x, z, C, Dp, A_v, Ap, A, remaining)
                if mistake and len(types) != 1:
                    raise ClassificationViolationError(
                        f"mistake {pair} at pivot {v} matches types {types}"
                    )
                if not mistake and types:
                    raise ClassificationViolationError(
                        f"non-mistake {pair} at pivot {v} matches types {types}"
                    )
                if mistake:
                    counts[types[0]] += 1
        for j, cnt in counts.items():
            totals[j] += cnt
        iterations.append(
            IterationMistakes(
                pivot=v,
                counts=counts,
                line_totals=charges.line_totals[idx],
                flood_branch=len(A_v) > trace.params.k * len(C),
            )
        )
    return MistakeReport(counts=totals, iterations=iterations)


@dataclass
class WidthEstimate:
    """Per-pair Monte-Carlo estimate of the expected charge load."""

    n: int
    trials: int
    mean: np.ndarray  # (n, n), upper triangle
    se: np.ndarray

    def pairs(self) -> Iterator[tuple[int, int, float, float]]:
        for a in range(self.n):
            for b in range(a + 1, self.n):
                yield a, b, float(self.mean[a, b]), float(self.se[a, b])

    def max_pair(self) -> tuple[int, int, float, float]:
        """The pair with the largest estimated mean."""
        flat = np.triu(self.mean, 1)
        a, b = np.unravel_index(int(np.argmax(flat)), flat.shape)
        return int(a), int(b), float(self.mean[a, b]), float(self.se[a, b])


def width_sums(
    g: Graph, p: Params, seed: int, start: int, stop: int
) -> tuple[np.ndarray, np.ndarray]:
    """Per-pair charge sums and squared sums over trial indices [start, stop)."""
    n = g.n
    acc = np.zeros((n, n))
    acc_sq = np.zeros((n, n))
    for t in range(start, stop):
        tape = make_tape(n, derive_seed(seed, t))
        _, trace = run_modified_pivot(g, tape, p)
        cv = compute_charges(g, trace, p)
        for (a, b), y in cv.pair_charges().items():
            lo, hi = min(a, b), max(a, b)
            acc[lo, hi] += y
            acc_sq[lo, hi] += y * y
    return acc, acc_sq


def width_from_sums(
    n: int, trials: int, acc: np.ndarray, acc_sq: np.ndarray
) -> WidthEstimate:
    mean = acc / trials
    if trials > 1:
        var = np.maximum(acc_sq / trials - mean**2, 0.0) * trials / (trials - 1)
        se = np.sqrt(var / trials)
    else:
        se = np.zeros_like(mean)
    return WidthEstimate(n=n, trials=trials, mean=mean, se=se)


def estimate_pair_width(
    g: Graph, p: Params, trials: int, seed: int
) -> WidthEstimate:
    """Aggregate per-pair charge loads over independently-taped runs."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    acc, acc_sq = width_sums(g, p, seed, 0, trials)
    return width_from_sums(g.n, trials, acc, acc_sq)


def audit_report(
    g: Graph,
    trace: ExecutionTrace,
    charges: ChargeVector,
    mistakes: MistakeReport,
    width: WidthEstimate | None = None,
) -> dict:
    """Machine-readable audit summary (schema 1)."""
    cost = clustering_cost(g, clustering_from_trace(trace))
    total = charges.total()
    doc = {
        "schema": 1,
        "total_charge": total,
        "cost": cost,
        "margin": total - cost,
        "per_type_counts": {str(j): mistakes.counts[j] for j in range(1, 8)},
    }
    if width is not None:
        doc["width"] = [
            {"u": a, "v": b, "mean": m, "se": s} for a, b, m, s in width.pairs()
        ]
    return doc
