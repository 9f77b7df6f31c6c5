"""Monte-Carlo experiment drivers shared by the CLI and the test suite.

Each driver derives an independent tape per trial (base seed xor trial
index) and aggregates results in trial order, so reports are a pure
function of (config, seed) regardless of how many workers run.  Worker
count is capped by the CORRCLUST_THREADS environment variable; the
default is serial execution.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .audit import (
    WidthEstimate,
    classify_mistakes,
    compute_charges,
    verify_charge_dominance,
    width_from_sums,
    width_sums,
)
from .dynamic import DynamicState, UpdateStats
from .graph import Graph, clustering_cost
from .pivot import run_modified_pivot, run_pivot
from .tape import Params, derive_seed, make_tape


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("CORRCLUST_THREADS", "1")))
    except ValueError:
        return 1


def _chunk_ranges(trials: int, workers: int) -> list[tuple[int, int]]:
    per = -(-trials // workers)
    return [(lo, min(lo + per, trials)) for lo in range(0, trials, per)]


def mean_and_se(values: np.ndarray) -> tuple[float, float]:
    """Sample mean and its standard error."""
    values = np.asarray(values, dtype=float)
    mean = float(values.mean())
    if len(values) < 2:
        return mean, 0.0
    return mean, float(values.std(ddof=1) / np.sqrt(len(values)))


def _static_chunk(args) -> list[int]:
    g, p, algorithm, seed, start, stop = args
    costs = []
    for t in range(start, stop):
        tape = make_tape(g.n, derive_seed(seed, t))
        if algorithm == "pivot":
            c, _ = run_pivot(g, tape)
        else:
            c, _ = run_modified_pivot(g, tape, p)
        costs.append(clustering_cost(g, c))
    return costs


def _map_chunks(fn, arg_for_chunk, trials: int):
    workers = worker_count()
    if workers == 1 or trials < 2 * workers:
        return [fn(arg_for_chunk(0, trials))]
    ranges = _chunk_ranges(trials, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, [arg_for_chunk(lo, hi) for lo, hi in ranges]))


def static_costs(
    g: Graph, p: Params, trials: int, seed: int, algorithm: str = "modified"
) -> np.ndarray:
    """Clustering cost of `algorithm` on g over `trials` independent tapes."""
    if algorithm not in ("pivot", "modified"):
        raise ValueError(f"unknown algorithm {algorithm!r}")
    parts = _map_chunks(
        _static_chunk, lambda lo, hi: (g, p, algorithm, seed, lo, hi), trials
    )
    return np.concatenate([np.asarray(c) for c in parts])


def _audit_chunk(args) -> tuple[int, float, dict[int, int]]:
    g, p, seed, start, stop, classify = args
    failures = 0
    min_margin = float("inf")
    counts = {j: 0 for j in range(1, 8)}
    for t in range(start, stop):
        tape = make_tape(g.n, derive_seed(seed, t))
        _, trace = run_modified_pivot(g, tape, p)
        cv = compute_charges(g, trace, p)
        ok, margin = verify_charge_dominance(g, trace, cv)
        failures += 0 if ok else 1
        min_margin = min(min_margin, margin)
        if classify:
            report = classify_mistakes(g, trace)
            report.assert_line_inequalities()
            for j, c in report.counts.items():
                counts[j] += c
    return failures, min_margin, counts


def audit_runs(
    g: Graph, p: Params, trials: int, seed: int, classify: bool = False
) -> dict:
    """Dominance (and optionally mistake-taxonomy) checks over many tapes."""
    parts = _map_chunks(
        _audit_chunk, lambda lo, hi: (g, p, seed, lo, hi, classify), trials
    )
    failures = sum(f for f, _, _ in parts)
    min_margin = min(m for _, m, _ in parts)
    counts = {j: sum(c[j] for _, _, c in parts) for j in range(1, 8)}
    out = {
        "runs": trials,
        "dominance_failures": failures,
        "min_margin": min_margin,
    }
    if classify:
        out["mistake_counts"] = counts
    return out


def _width_chunk(args):
    g, p, seed, start, stop = args
    return width_sums(g, p, seed, start, stop)


def width_estimate(g: Graph, p: Params, trials: int, seed: int) -> WidthEstimate:
    """Per-pair expected charge load, Monte-Carlo over independent tapes."""
    parts = _map_chunks(_width_chunk, lambda lo, hi: (g, p, seed, lo, hi), trials)
    acc = sum(a for a, _ in parts)
    acc_sq = sum(s for _, s in parts)
    return width_from_sums(g.n, trials, acc, acc_sq)


def dynamic_run(
    g: Graph,
    p: Params,
    stream: list[tuple[int, int]],
    seed: int,
    verify: bool = False,
) -> tuple[list[UpdateStats], int]:
    """Apply a flip stream to the dynamic engine.

    Returns per-update stats and the number of steps (including the cold
    start) where the derived clustering disagreed with a static recompute
    — only checked when verify is set, and always 0 when the engine is
    healthy.
    """
    tape = make_tape(g.n, seed)
    state = DynamicState(g, tape, p)
    mismatches = 0
    if verify:
        c, _ = run_modified_pivot(state.g, tape, p)
        if state.assignment() != c.assignment:
            mismatches += 1
    stats = []
    for u, v in stream:
        stats.append(state.apply_update(u, v))
        if verify:
            c, _ = run_modified_pivot(state.g, tape, p)
            if state.assignment() != c.assignment:
                mismatches += 1
    return stats, mismatches
