"""Command-line entry point: instance generation, experiment drivers, reports.

Subcommands:

  gen      write an instance as an edge list (or a flip stream with --stream)
  static   Monte-Carlo cost of the pivot / modified-pivot algorithms
  audit    per-run charge dominance and optional mistake taxonomy
  width    per-pair expected charge load estimate
  oracle   exact optimum and greedy bad-triangle packing bound
  dynamic  apply a flip stream to the maintained clustering, CSV stats
  bench    small fixed sweep touching every driver

JSON reports carry a `schema: 1` field; the per-update CSV has columns
`step,flip_u,flip_v,affected,micros`.  Worker count for trial loops is
capped by CORRCLUST_THREADS.  Exit code is nonzero when any checked
invariant fails.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import experiments
from .generators import (
    gen_complete_bipartite,
    gen_complete_minus_edge,
    gen_er,
    gen_flip_stream,
    gen_two_cliques,
)
from .graph import Graph, write_edge_list, write_update_stream
from .oracle import brute_force_opt, triangle_packing_lower_bound
from .tape import DEFAULT_DELTA, DEFAULT_EPSILON, DEFAULT_K, Params

INSTANCES = ("two_cliques", "kn_minus_e", "bipartite", "er")


def _add_instance_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--instance", choices=INSTANCES, required=True)
    sp.add_argument("--n", type=int, required=True, help="vertex count (part 1 size for bipartite)")
    sp.add_argument("--n2", type=int, default=None, help="second part size (bipartite only)")
    sp.add_argument("--p", type=float, default=0.5, help="edge probability (er only)")
    sp.add_argument("--seed", type=int, default=0)


def _add_param_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    sp.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    sp.add_argument("--k", type=float, default=DEFAULT_K)


def make_instance(args: argparse.Namespace) -> Graph:
    if args.instance == "two_cliques":
        if args.n % 2:
            raise SystemExit("two_cliques needs an even --n")
        return gen_two_cliques(args.n // 2)
    if args.instance == "kn_minus_e":
        return gen_complete_minus_edge(args.n)
    if args.instance == "bipartite":
        n2 = args.n2 if args.n2 is not None else 5 * args.n
        return gen_complete_bipartite(args.n, n2)
    return gen_er(args.n, args.p, args.seed)


def _params(args: argparse.Namespace) -> Params:
    return Params(epsilon=args.epsilon, delta=args.delta, k=args.k)


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _instance_doc(args: argparse.Namespace) -> dict:
    doc = {"family": args.instance, "n": args.n, "seed": args.seed}
    if args.instance == "bipartite":
        doc["n2"] = args.n2 if args.n2 is not None else 5 * args.n
    if args.instance == "er":
        doc["p"] = args.p
    return doc


def cmd_gen(args: argparse.Namespace) -> int:
    g = make_instance(args)
    write = sys.stdout if args.out is None else open(args.out, "w")
    try:
        if args.stream:
            stream = gen_flip_stream(g.n, args.stream, args.seed, bias=args.bias, start=g)
            write_update_stream(stream, write)
        else:
            write_edge_list(g, write)
    finally:
        if write is not sys.stdout:
            write.close()
    return 0


def cmd_static(args: argparse.Namespace) -> int:
    g = make_instance(args)
    p = _params(args)
    algos = ("pivot", "modified") if args.algorithm == "both" else (args.algorithm,)
    report = {
        "schema": 1,
        "mode": "static",
        "instance": _instance_doc(args),
        "trials": args.trials,
        "algorithms": {},
    }
    for algo in algos:
        costs = experiments.static_costs(g, p, args.trials, args.seed, algo)
        mean, se = experiments.mean_and_se(costs)
        report["algorithms"][algo] = {
            "mean_cost": mean,
            "se": se,
            "min_cost": int(costs.min()),
            "max_cost": int(costs.max()),
        }
    _emit(report, args.out)
    return 0


def cmd_audit(args: argparse.Namespace) -> int:
    g = make_instance(args)
    p = _params(args)
    result = experiments.audit_runs(g, p, args.trials, args.seed, classify=args.classify)
    report = {
        "schema": 1,
        "mode": "audit",
        "instance": _instance_doc(args),
        **result,
    }
    _emit(report, args.out)
    return 0 if result["dominance_failures"] == 0 else 1


def cmd_width(args: argparse.Namespace) -> int:
    g = make_instance(args)
    p = _params(args)
    est = experiments.width_estimate(g, p, args.trials, args.seed)
    a, b, mean, se = est.max_pair()
    report = {
        "schema": 1,
        "mode": "width",
        "instance": _instance_doc(args),
        "trials": args.trials,
        "max_pair": {"u": a, "v": b, "mean": mean, "se": se},
    }
    _emit(report, args.out)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    g = make_instance(args)
    opt = brute_force_opt(g)
    report = {
        "schema": 1,
        "mode": "oracle",
        "instance": _instance_doc(args),
        "opt_cost": opt.cost,
        "partitions_examined": opt.partitions_examined,
        "packing_lower_bound": triangle_packing_lower_bound(g),
    }
    _emit(report, args.out)
    return 0


def cmd_dynamic(args: argparse.Namespace) -> int:
    g = make_instance(args)
    p = _params(args)
    stream = gen_flip_stream(g.n, args.updates, args.seed + 1, bias=args.bias, start=g)
    stats, mismatches = experiments.dynamic_run(g, p, stream, args.seed, verify=args.verify)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("step,flip_u,flip_v,affected,micros\n")
            for i, ((u, v), s) in enumerate(zip(stream, stats)):
                fh.write(f"{i},{u},{v},{s.affected},{s.micros:.1f}\n")
    n = g.n
    report = {
        "schema": 1,
        "mode": "dynamic",
        "instance": _instance_doc(args),
        "updates": len(stream),
        "mean_affected": sum(s.affected for s in stats) / max(1, len(stats)),
        "mean_micros": sum(s.micros for s in stats) / max(1, len(stats)),
        "log2n_squared": math.log(n) ** 2 if n > 1 else 0.0,
        "verified": bool(args.verify),
        "mismatches": mismatches,
    }
    _emit(report, args.out)
    return 0 if mismatches == 0 else 1


def cmd_bench(args: argparse.Namespace) -> int:
    """A reduced-scale sweep: one run of every driver on small instances."""
    p = Params()
    seed = args.seed
    results = []

    g = gen_two_cliques(10)
    for algo in ("pivot", "modified"):
        costs = experiments.static_costs(g, p, args.trials, seed, algo)
        mean, se = experiments.mean_and_se(costs)
        results.append({"driver": "static", "algorithm": algo, "mean_cost": mean, "se": se})

    audit = experiments.audit_runs(gen_er(20, 0.3, seed), p, args.trials, seed, classify=True)
    results.append({"driver": "audit", **audit})

    est = experiments.width_estimate(gen_er(16, 0.5, seed), p, args.trials, seed)
    a, b, mean, se = est.max_pair()
    results.append({"driver": "width", "max_pair_mean": mean, "se": se})

    g = gen_er(9, 0.4, seed)
    results.append(
        {
            "driver": "oracle",
            "opt_cost": brute_force_opt(g).cost,
            "packing_lower_bound": triangle_packing_lower_bound(g),
        }
    )

    g = gen_er(30, 0.2, seed)
    stream = gen_flip_stream(g.n, 50, seed + 1, start=g)
    stats, mismatches = experiments.dynamic_run(g, p, stream, seed, verify=True)
    results.append(
        {
            "driver": "dynamic",
            "updates": len(stream),
            "mean_affected": sum(s.affected for s in stats) / len(stats),
            "mismatches": mismatches,
        }
    )

    _emit({"schema": 1, "mode": "bench", "results": results}, args.out)
    bad = any(r.get("dominance_failures") or r.get("mismatches") for r in results)
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="corrclust", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("gen", help="write an instance or flip stream")
    _add_instance_args(sp)
    sp.add_argument("--stream", type=int, default=0, help="emit a flip stream of this length instead")
    sp.add_argument("--bias", type=float, default=0.5, help="insert probability for --stream")
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=cmd_gen)

    sp = sub.add_parser("static", help="Monte-Carlo clustering cost")
    _add_instance_args(sp)
    _add_param_args(sp)
    sp.add_argument("--algorithm", choices=("pivot", "modified", "both"), default="both")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=cmd_static)

    sp = sub.add_parser("audit", help="charge dominance over many tapes")
    _add_instance_args(sp)
    _add_param_args(sp)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--classify", action="store_true", help="also run the mistake taxonomy")
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=cmd_audit)

    sp = sub.add_parser("width", help="per-pair expected charge load")
    _add_instance_args(sp)
    _add_param_args(sp)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=cmd_width)

    sp = sub.add_parser("oracle", help="exact optimum (small n) and packing bound")
    _add_instance_args(sp)
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=cmd_oracle)

    sp = sub.add_parser("dynamic", help="apply a flip stream to the maintained clustering")
    _add_instance_args(sp)
    _add_param_args(sp)
    sp.add_argument("--updates", type=int, default=100)
    sp.add_argument("--bias", type=float, default=0.5)
    sp.add_argument("--verify", action="store_true", help="compare against a static recompute after every flip")
    sp.add_argument("--csv", default=None, help="write per-update stats to this CSV file")
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=cmd_dynamic)

    sp = sub.add_parser("bench", help="reduced-scale sweep of all drivers")
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.set_defaults(fn=cmd_bench)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
