"""Command line entry point: ``percolor <subcommand> ...``.

Every subcommand prints JSON on stdout.  ``corpus-run`` takes a JSON config;
flags given on the command line override the config's values.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bounds as B
from .corpus import resolve
from .families import frankl_check
from .graph import format_dimacs, write_dimacs
from .percolation import exact_chi_distribution, mc_tail
from .runner import run, write_outputs
from .solvers import (
    chromatic_number,
    critical_subgraph,
    hadwiger_number,
    independence_number,
    min_monochromatic_edges,
)


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")


def _graph_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", "-g", required=True,
                   help="DIMACS file, corpus name (C5, Petersen, ...) or generator string (K5, gnp:20,1/2,7)")


def cmd_gen(a) -> int:
    name, G = resolve(a.spec)
    if a.out:
        write_dimacs(G, a.out, comment=name)
    else:
        sys.stdout.write(format_dimacs(G, comment=name))
    return 0


def cmd_chi(a) -> int:
    name, G = resolve(a.graph)
    res = chromatic_number(G)
    _emit({"graph": name, "chi": res.value, "witness": res.witness.sorted_blocks(),
           "nodes_explored": res.nodes_explored})
    return 0


def cmd_alpha(a) -> int:
    name, G = resolve(a.graph)
    res = independence_number(G)
    _emit({"graph": name, "alpha": res.value, "witness": res.witness, "nodes_explored": res.nodes_explored})
    return 0


def cmd_mono(a) -> int:
    name, G = resolve(a.graph)
    res = min_monochromatic_edges(G, a.c)
    _emit({"graph": name, "c": a.c, "min_monochromatic_edges": res.value,
           "witness": res.extra["labels"], "nodes_explored": res.nodes_explored})
    return 0


def cmd_hadwiger(a) -> int:
    name, G = resolve(a.graph)
    res = hadwiger_number(G, a.cap)
    _emit({"graph": name, "hadwiger": res.value, "branch_sets": res.witness})
    return 0


def cmd_critical(a) -> int:
    name, G = resolve(a.graph)
    H = critical_subgraph(G, a.k)
    _emit({"graph": name, "n": H.n, "m": H.m, "edges": [list(e) for e in H.edges]})
    return 0


def cmd_percolate_exact(a) -> int:
    name, G = resolve(a.graph)
    dist = exact_chi_distribution(G, a.p, a.cap)
    out = {"graph": name, **dist.to_json()}
    e = dist.expectation()
    out["expected_chi"] = {"exact": str(e), "decimal": float(e)}
    if a.d is not None:
        t = dist.tail(a.d)
        out["d"] = a.d
        out["tail"] = {"exact": str(t), "decimal": float(t)}
    _emit(out)
    return 0


def cmd_percolate_mc(a) -> int:
    name, G = resolve(a.graph)
    p = a.p if "/" in a.p else float(a.p)
    est = mc_tail(G, p, a.d, a.trials, a.seed, a.confidence, a.workers)
    _emit({"graph": name, "p": a.p, "d": a.d, **est.to_json()})
    return 0


def cmd_bounds(a) -> int:
    which = a.which
    if which == "er_tail":
        reps = [B.er_tail_bound(a.k, a.d, strict=a.strict)]
    elif which == "union_tail":
        reps = [B.union_tail_bound(a.n, a.k, a.d)]
    elif which == "frankl_tail":
        reps = [B.frankl_tail_bound(a.t)]
    elif which == "thm_item2":
        reps = [B.thm_item2_bound(a.k, a.d)]
    elif which == "alpha_tail":
        reps = [B.alpha_tail_bound(a.n, a.k, a.C, a.p, a.d)]
    else:
        reps = B.expectation_lower_bounds(a.k, a.C, a.p)
    if a.empirical is not None:
        reps = [B.compare(r, Fraction(a.empirical)) for r in reps]
    _emit(reps[0].to_json() if len(reps) == 1 else [r.to_json() for r in reps])
    return 0


def cmd_verify(a) -> int:
    config = {"graphs": [a.graph], "operations": [{"op": "verify", "d": a.d or [1, 2, 3]}]}
    record = run(config)
    _emit(record.to_json(timings=False))
    return record.exit_code


def cmd_verify_frankl(a) -> int:
    name, G = resolve(a.graph)
    rep = frankl_check(G, a.d)
    _emit({"graph": name, **rep.to_json()})
    ok = rep.verdict == "holds" and rep.details["intersection_claim_holds"]
    return 0 if ok else 1


def cmd_corpus_run(a) -> int:
    config: dict = {}
    if a.config:
        with open(a.config) as fh:
            config = json.load(fh)
    if a.graphs:
        config["graphs"] = a.graphs
    overrides = {k: getattr(a, k) for k in ("trials", "seed", "confidence", "p")
                 if getattr(a, k) is not None}
    if overrides:
        for op in config.get("operations", []):
            for k, v in overrides.items():
                if k in op or op["op"] == "mc_tail":
                    op[k] = v
    if a.cap is not None:
        config.setdefault("caps", {})["exact_edges"] = a.cap
    out = config.get("output", {})
    json_path = a.json or out.get("json")
    csv_path = a.csv or out.get("csv")
    record = run(config)
    write_outputs(record, json_path, csv_path)
    if not json_path:
        _emit(record.to_json())
    else:
        _emit(record.to_json(timings=False)["summary"])
    return record.exit_code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="percolor", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a generated graph as DIMACS")
    p.add_argument("spec")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_gen)

    for name, func, doc in (("chi", cmd_chi, "chromatic number"),
                            ("alpha", cmd_alpha, "independence number")):
        p = sub.add_parser(name, help=doc)
        _graph_arg(p)
        p.set_defaults(func=func)

    p = sub.add_parser("mono", help="fewest monochromatic edges over c-colourings")
    _graph_arg(p)
    p.add_argument("--c", type=int, required=True)
    p.set_defaults(func=cmd_mono)

    p = sub.add_parser("hadwiger", help="exact Hadwiger number (small graphs)")
    _graph_arg(p)
    p.add_argument("--cap", type=int, default=10)
    p.set_defaults(func=cmd_hadwiger)

    p = sub.add_parser("critical", help="k-critical subgraph")
    _graph_arg(p)
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("percolate-exact", help="exact law of chi(G_p)")
    _graph_arg(p)
    p.add_argument("--p", default="1/2", help="rational a/b")
    p.add_argument("--d", type=int)
    p.add_argument("--cap", type=int, default=24)
    p.set_defaults(func=cmd_percolate_exact)

    p = sub.add_parser("percolate-mc", help="Monte Carlo estimate of Pr[chi(G_p) <= d]")
    _graph_arg(p)
    p.add_argument("--p", default="1/2")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_percolate_mc)

    p = sub.add_parser("bounds", help="evaluate a closed-form bound")
    p.add_argument("--which", required=True,
                   choices=["er_tail", "union_tail", "frankl_tail", "thm_item2", "alpha_tail", "expectation"])
    for flag in ("k", "d", "n", "t"):
        p.add_argument(f"--{flag}", type=int)
    p.add_argument("--C", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--strict", action="store_true")
    p.add_argument("--empirical", help="exact value a/b to compare against")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="full bound-versus-exact battery")
    _graph_arg(p)
    p.add_argument("--d", type=int, action="append")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify-frankl", help="3-wise intersection and closure check")
    _graph_arg(p)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_verify_frankl)

    p = sub.add_parser("corpus-run", help="run a JSON experiment config")
    p.add_argument("--config")
    p.add_argument("--graphs", nargs="+")
    p.add_argument("--json")
    p.add_argument("--csv")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--confidence", type=float)
    p.add_argument("--p")
    p.add_argument("--cap", type=int)
    p.set_defaults(func=cmd_corpus_run)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
