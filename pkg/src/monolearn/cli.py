"""Command-line entry point: ``monolearn <command> ...``.

Reports are JSON with sorted keys, so fixed inputs and seeds give identical
bytes.  Wall-clock timings are only included with ``--timing``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional

import numpy as np

from .boolfn import (FunctionLabels, RandomizedLabels, format_truth_table, read_truth_table)
from .corrector import hypercube_corrector
from .generators import make_target
from .lca import Seed, bench_lca, random_bounded_degree_graph
from .learner import estimate_distance, hypothesis_error, monotone_learner
from .matching import check_valid, match_violations, matching_weight
from .oracle_exact import closest_monotone_boolean, exact_l1_dist, min_monotone_error
from .poset import full_cube, is_monotone_table, load_edge_list, truncated_cube
from .verify import SUITES, run_criteria


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_jsonable(report), sort_keys=True, indent=2)


def _seed_int(hex_seed: str) -> int:
    return int(hex_seed, 16) % (1 << 32)


def load_target(target: str, n: Optional[int], hex_seed: str):
    """A truth-table file path or a generator spec; returns (n, source, table-or-None)."""
    path = Path(target)
    if path.is_file():
        tn, table = read_truth_table(path)
        if n is not None and n != tn:
            raise SystemExit(f"--n {n} disagrees with the table's n={tn}")
        if np.all(np.abs(table) == 1):
            return tn, FunctionLabels(tn, table), table
        if np.all((table >= 0) & (table <= 1)):
            # a real table in [0, 1] is read as Pr[label = +1]
            return tn, RandomizedLabels(tn, table), None
        raise SystemExit("table entries must be +-1 labels or probabilities in [0, 1]")
    if n is None:
        raise SystemExit("--n is required with a generator spec")
    tg = make_target(target, n, seed=_seed_int(hex_seed))
    return n, tg.source, tg.table


def exact_optimum(n: int, source, table) -> dict:
    if table is not None:
        _, opt = closest_monotone_boolean(table, n)
        return {"opt": opt, "kind": "hamming"}
    err, _ = min_monotone_error(source.p_plus, n)
    return {"opt": err, "kind": "min-monotone-error"}


def _learner_kwargs(args) -> dict:
    kw = {"degree": args.degree, "samples": args.samples, "threshold_samples": args.threshold_samples,
          "monotone_gate": args.monotone_gate, "l1_gate": args.l1_gate}
    return {k: v for k, v in kw.items() if v is not None}


def cmd_gen(args) -> dict:
    tg = make_target(args.spec, args.n, seed=_seed_int(args.seed))
    if tg.table is None:
        raise SystemExit("randomized-labels has no single truth table; use noisy(...) for a fixed one")
    text = format_truth_table(args.n, tg.table)
    return {"command": "gen", "spec": args.spec, "n": args.n, "seed": args.seed,
            "monotone": is_monotone_table(tg.table, args.n), "_text": text}


def cmd_learn(args) -> dict:
    n, source, table = load_target(args.target, args.n, args.seed)
    seed = Seed(args.seed)
    h = monotone_learner(n, args.eps, source, seed, **_learner_kwargs(args))
    htable = h.table()
    report = {"command": "learn", "target": args.target, "n": n, "eps": args.eps, "seed": args.seed,
              "alpha": h.provenance["alpha"], "threshold": h.threshold, "provenance": h.provenance,
              "monotone": is_monotone_table(htable, n), "error": hypothesis_error(h, source),
              "hypothesis": htable, "_text": format_truth_table(n, htable)}
    if n <= 16:
        report.update(exact_optimum(n, source, table))
    return report


def cmd_estimate(args) -> dict:
    n, source, table = load_target(args.target, args.n, args.seed)
    res = estimate_distance(source, n, args.eps, Seed(args.seed), **_learner_kwargs(args))
    report = {"command": "estimate-dist", "target": args.target, "n": n, "eps": args.eps,
              "seed": args.seed, "est": res.estimate, "samples": res.samples,
              "alpha": res.hypothesis.provenance["alpha"],
              "ellipsoid": res.hypothesis.provenance["ellipsoid"],
              "seed_bytes": res.hypothesis.provenance["seed_bytes"]}
    if n <= 16:
        report.update(exact_optimum(n, source, table))
    return report


def cmd_dist_exact(args) -> dict:
    n, source, table = load_target(args.target, args.n, args.seed)
    report = {"command": "dist-exact", "target": args.target, "n": n}
    report.update(exact_optimum(n, source, table))
    if table is not None:
        report["dist1"] = exact_l1_dist(full_cube(n), table).distance
    return report


def cmd_correct(args) -> dict:
    n, values = read_truth_table(args.input)
    cf = hypercube_corrector(values, n, args.eps, Seed(args.seed))
    return {"command": "correct", "input": args.input, "n": n, "eps": args.eps, "seed": args.seed,
            "monotone": is_monotone_table(cf.table, n), "l1_change": float(np.mean(np.abs(cf.table - values))),
            "info": cf.info, "_text": format_truth_table(n, cf.table)}


def cmd_match(args) -> dict:
    if args.dag:
        P = load_edge_list(args.dag)
        values = np.array(Path(args.input).read_text().split(), dtype=float)
        if len(values) != P.n_elements:
            raise SystemExit(f"expected {P.n_elements} values, got {len(values)}")
    else:
        n, table = read_truth_table(args.input)
        P = truncated_cube(n, args.eps)
        values = table[P.elements()]
    M = match_violations(P, values, args.eps, Seed(args.seed), mode=args.mode, branch=args.branch)
    report = {"command": "match", "input": args.input, "eps": args.eps, "seed": args.seed, "mode": args.mode,
              "N": P.n_elements, "pairs": M.pairs(), "weight": matching_weight(M, values),
              "valid": check_valid(M, values)}
    if hasattr(M, "probe_stats"):
        report["probes"] = M.probe_stats()
    return report


def cmd_bench(args) -> dict:
    rng = np.random.default_rng(_seed_int(args.seed))
    adj = random_bounded_degree_graph(args.vertices, args.degree, rng)
    stats = bench_lca(adj, Seed(args.seed), args.queries, ceiling=args.ceiling, rng=rng)
    return {"command": "bench-lca", "seed": args.seed, "vertices": args.vertices, "degree": args.degree,
            "queries": args.queries, "stats": stats}


def cmd_verify(args) -> dict:
    ids = SUITES[args.suite]
    log = None if args.json else (lambda line: print(line, flush=True))
    reports = run_criteria(ids, scale=args.scale, budget=args.budget, corrupt=args.corrupt, log=log)
    return {"command": "verify", "suite": args.suite, "scale": args.scale, "corrupt": args.corrupt,
            "passed": all(r.passed for r in reports), "incomplete": any(r.incomplete for r in reports),
            "criteria": [r.to_dict() for r in reports], "_silent": not args.json}


COMMANDS = {"gen": cmd_gen, "learn": cmd_learn, "estimate-dist": cmd_estimate, "dist-exact": cmd_dist_exact,
            "correct": cmd_correct, "match": cmd_match, "bench-lca": cmd_bench, "verify": cmd_verify}


GLOBAL_DEFAULTS = {"seed": "00", "out": None, "json": False, "timing": False}


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand without clobbering each other
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--seed", help="hex seed (default 00)")
    common.add_argument("--out", help="write the result here instead of stdout")
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--timing", action="store_true", help="include wall-clock seconds in the report")

    p = argparse.ArgumentParser(prog="monolearn", description="Agnostic learning of monotone Boolean functions.",
                                parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="write a generator's truth table")
    g.add_argument("spec")
    g.add_argument("--n", type=int, required=True)

    def learner_flags(q):
        q.add_argument("--target", required=True, help="truth-table file or generator spec")
        q.add_argument("--n", type=int)
        q.add_argument("--eps", type=float, default=0.1)
        q.add_argument("--degree", type=int)
        q.add_argument("--samples", type=int)
        q.add_argument("--threshold-samples", type=int)
        q.add_argument("--monotone-gate", type=float)
        q.add_argument("--l1-gate", type=float)

    learner_flags(sub.add_parser("learn", parents=[common], help="learn a monotone hypothesis"))
    learner_flags(sub.add_parser("estimate-dist", parents=[common], help="estimate the distance to monotone"))

    d = sub.add_parser("dist-exact", parents=[common], help="exact distance to monotone (small n)")
    d.add_argument("--target", required=True)
    d.add_argument("--n", type=int)

    c = sub.add_parser("correct", parents=[common], help="monotone correction of a real table")
    c.add_argument("--input", required=True)
    c.add_argument("--eps", type=float, default=0.1)

    m = sub.add_parser("match", parents=[common], help="matching on the violation graph")
    m.add_argument("--input", required=True, help="truth table, or whitespace-separated values with --dag")
    m.add_argument("--dag", help="edge-list file defining the poset")
    m.add_argument("--eps", type=float, default=0.1)
    m.add_argument("--mode", choices=["materialized", "local"], default="materialized")
    m.add_argument("--branch", choices=["auto", "layered", "greedy"], default="auto")

    b = sub.add_parser("bench-lca", parents=[common], help="probe counts of the matching LCA")
    b.add_argument("--vertices", type=int, default=1000)
    b.add_argument("--degree", type=int, default=4)
    b.add_argument("--queries", type=int, default=100)
    b.add_argument("--ceiling", type=int, default=100_000)

    v = sub.add_parser("verify", parents=[common], help="run acceptance suites")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--budget", type=float, help="seconds; criteria past the budget are flagged incomplete")
    v.add_argument("--scale", type=float, default=1.0, help="fraction of the full trial counts")
    v.add_argument("--corrupt", action="store_true", help="negative control: swap in a non-correcting corrector")
    return p


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    t0 = time.time()
    report = COMMANDS[args.command](args)
    if args.timing:
        report["seconds"] = round(time.time() - t0, 3)
    text = report.pop("_text", None)
    silent = report.pop("_silent", False)
    body = dumps(report)
    if args.out:
        out = Path(args.out)
        if text is not None and not args.json:
            out.write_text(text)
        else:
            out.write_text(body + "\n")
            if text is not None:
                out.with_suffix(".table").write_text(text)
    elif args.json or text is None:
        if not silent:
            print(body)
    else:
        print(text, end="" if text.endswith("\n") else "\n")
    if args.command == "verify":
        return 0 if report["passed"] else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
