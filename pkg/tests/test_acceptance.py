"""Acceptance suite: one test per numbered criterion.

Monte-Carlo criteria use fixed seeds, the stated trial counts, and
3-standard-error tolerances; oracle criteria compare against exact
recomputation.  Each test prints one summary line and asserts its
runtime budget.
"""

import math
import time

import numpy as np
import pytest

from corrclust import (
    WIDTH_BOUND,
    Params,
    brute_force_opt,
    gen_complete_bipartite,
    gen_complete_minus_edge,
    gen_er,
    gen_flip_stream,
    gen_two_cliques,
)
from corrclust.experiments import (
    audit_runs,
    dynamic_run,
    mean_and_se,
    static_costs,
    width_estimate,
)

SEED = 20260826
P = Params()


def check_budget(t0, limit_s, label):
    elapsed = time.time() - t0
    assert elapsed < limit_s, f"{label} took {elapsed:.0f}s, budget {limit_s}s"
    return elapsed


def test_criterion_1_two_cliques_mean_costs():
    t0 = time.time()
    g = gen_two_cliques(50)
    pivot_costs = static_costs(g, P, 10_000, SEED, "pivot")
    mod_costs = static_costs(g, P, 10_000, SEED, "modified")
    pm, pse = mean_and_se(pivot_costs)
    mm, mse = mean_and_se(mod_costs)
    closed_form = (1 - 2 / 100) * 1 + (2 / 100) * 98  # = 2.94
    assert abs(pm - closed_form) <= 3 * pse, (pm, pse)
    assert mm <= 2.0 + 3 * mse, (mm, mse)
    el = check_budget(t0, 60, "criterion 1")
    print(
        f"\nACCEPTANCE 1: PASS pivot {pm:.3f}±{pse:.3f} (target 2.94), "
        f"modified {mm:.3f}±{mse:.3f} (≤2.0+3SE), {el:.1f}s"
    )


def test_criterion_2_kn_minus_edge():
    t0 = time.time()
    g = gen_complete_minus_edge(400)
    mod_costs = static_costs(g, P, 1_000, SEED, "modified")
    assert np.all(mod_costs == 1), np.unique(mod_costs)
    pivot_costs = static_costs(g, P, 1_000, SEED, "pivot")
    pm, pse = mean_and_se(pivot_costs)
    assert abs(pm - 2.985) <= 3 * pse, (pm, pse)
    el = check_budget(t0, 120, "criterion 2")
    print(
        f"\nACCEPTANCE 2: PASS modified cost=1 on 1000/1000 tapes, "
        f"pivot {pm:.3f}±{pse:.3f} (target 2.985), {el:.1f}s"
    )


def suite_instances():
    out = []
    for half in (2, 5, 10, 25, 50):
        out.append((f"two_cliques({half})", gen_two_cliques(half)))
    for n in (4, 10, 25, 50, 100, 200):
        out.append((f"kn_minus_e({n})", gen_complete_minus_edge(n)))
    for n1, n2 in ((3, 3), (3, 15), (5, 25), (2, 40)):  # ratios 1, 5, 5, 20
        out.append((f"bipartite({n1},{n2})", gen_complete_bipartite(n1, n2)))
    for n in (10, 30, 50):
        for p in (0.1, 0.5, 0.9):
            for s in range(2):
                out.append((f"er({n},{p},{s})", gen_er(n, p, SEED + s)))
    return out


@pytest.fixture(scope="module")
def audited_suite():
    t0 = time.time()
    trials = 160
    results = []
    for label, g in suite_instances():
        # Raises on any classification violation or line-inequality breach.
        res = audit_runs(g, P, trials, SEED, classify=True)
        results.append((label, res))
    return results, time.time() - t0


def test_criterion_3_charge_dominance(audited_suite):
    results, elapsed = audited_suite
    runs = sum(r["runs"] for _, r in results)
    failures = sum(r["dominance_failures"] for _, r in results)
    assert runs >= 5000, runs
    assert failures == 0, [(l, r) for l, r in results if r["dominance_failures"]]
    assert elapsed < 300, elapsed
    print(f"\nACCEPTANCE 3: PASS dominance 0 exceptions in {runs} runs, {elapsed:.1f}s")


def test_criterion_4_mistake_taxonomy(audited_suite):
    # The suite fixture classifies every run and asserts the per-iteration
    # inequalities inside the driver; reaching here means zero violations.
    results, elapsed = audited_suite
    runs = sum(r["runs"] for _, r in results)
    total_mistakes = sum(sum(r["mistake_counts"].values()) for _, r in results)
    assert runs >= 5000
    assert total_mistakes > 0  # the taxonomy actually saw mistakes
    print(
        f"\nACCEPTANCE 4: PASS taxonomy exhaustive/exclusive over {runs} runs "
        f"({total_mistakes} mistakes classified)"
    )


def test_criterion_5_width_bound():
    t0 = time.time()
    g = gen_er(50, 0.5, SEED)
    est = width_estimate(g, P, 20_000, SEED)
    bound = WIDTH_BOUND + 3 * est.se
    assert np.all(est.mean <= bound + 1e-12)
    a, b, m, se = est.max_pair()
    el = check_budget(t0, 600, "criterion 5")
    print(
        f"\nACCEPTANCE 5: PASS max pair ({a},{b}) load {m:.3f}±{se:.3f} "
        f"≤ {WIDTH_BOUND}+3SE over 20000 tapes, {el:.1f}s"
    )


def test_criterion_6_ratio_vs_opt():
    t0 = time.time()
    worst = 0.0
    for i in range(50):
        p_edge = (0.3, 0.5, 0.7)[i % 3]
        g = gen_er(9, p_edge, SEED + i)
        opt = brute_force_opt(g).cost
        costs = static_costs(g, P, 2_000, SEED + 1000 + i, "modified")
        mean, se = mean_and_se(costs)
        assert mean <= WIDTH_BOUND * opt + 3 * se + 1e-9, (i, mean, opt, se)
        if opt:
            worst = max(worst, mean / opt)
    el = check_budget(t0, 300, "criterion 6")
    print(
        f"\nACCEPTANCE 6: PASS 50 instances x 2000 tapes, worst mean/opt "
        f"{worst:.3f} ≤ {WIDTH_BOUND}, {el:.1f}s"
    )


def test_criterion_7_dynamic_equivalence():
    t0 = time.time()
    g = gen_er(200, 0.05, SEED)
    stream = gen_flip_stream(200, 5_000, SEED + 1, start=g)
    stats, mismatches = dynamic_run(g, P, stream, SEED + 2, verify=True)
    assert len(stats) == 5_000
    assert mismatches == 0
    el = check_budget(t0, 300, "criterion 7")
    print(f"\nACCEPTANCE 7: PASS dynamic == static after 5000/5000 flips, {el:.1f}s")


def test_criterion_8_dynamic_locality_soft():
    g = gen_er(1000, 0.01, SEED)
    stream = gen_flip_stream(1000, 5_000, SEED + 1, start=g)
    stats, _ = dynamic_run(g, P, stream, SEED + 2, verify=False)
    affected = np.array([s.affected for s in stats])
    micros = np.array([s.micros for s in stats])
    bound = 50 * math.log(1000) ** 2
    line = (
        f"mean |affected| {affected.mean():.2f} (bound {bound:.0f}), "
        f"mean update {micros.mean():.0f}µs over {len(stats)} flips"
    )
    if affected.mean() > bound:
        hist = np.bincount(affected)
        print(f"\nACCEPTANCE 8: SOFT-FAIL {line}\naffected distribution: {hist}")
        pytest.xfail("locality bound exceeded on this seed; distribution printed")
    print(f"\nACCEPTANCE 8: PASS {line}")
