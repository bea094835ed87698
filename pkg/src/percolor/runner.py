"""Batch experiment runner: resolve graphs, run operations, collect verdicts.

A config is a JSON object::

    {
      "graphs": "corpus" | [source, ...],
      "operations": [{"op": "exact_tail", "p": "1/2", "d": [1, 2]}, ...],
      "caps": {"exact_edges": 24, "partition_vertices": 14, "hadwiger_vertices": 10},
      "output": {"json": "run.json", "csv": "run.csv"}
    }

Per-item failures (cap exceeded, bad parameters) are recorded and the run
continues.  The exit code is nonzero iff some applicable bound is violated or
some invariant check fails.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import __version__
from . import bounds as B
from .corpus import builtin_corpus, resolve
from .families import (
    CLOSURE_CAP,
    PARTITION_CAP,
    closure_fraction,
    frankl_check,
    min_r_wise_intersection,
    uncut_family,
)
from .graph import Graph
from .percolation import (
    EXACT_EDGE_CAP,
    check_product_bound,
    exact_chi_distribution,
    mc_tail,
    parse_probability,
    thread_count,
)
from .solvers import (
    HADWIGER_CAP,
    chromatic_number,
    critical_subgraph,
    hadwiger_number,
    independence_number,
    is_critical,
    min_monochromatic_edges,
)

CSV_COLUMNS = ["graph", "n", "m", "chi", "alpha", "p", "d", "quantity", "value",
               "bound_name", "bound_log2", "verdict"]

DEFAULT_OPERATIONS = [
    {"op": "chi"},
    {"op": "alpha"},
    {"op": "verify", "d": [1, 2, 3]},
]

ITEM_ERRORS = (ValueError, TypeError, KeyError)


class ConfigError(ValueError):
    pass


@dataclass
class RunRecord:
    config_hash: str
    tool_version: str
    results: list[dict[str, Any]]
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def violations(self) -> int:
        return sum(1 for g in self.results for it in g["items"]
                   if it.get("verdict") == "violated" and it.get("counted", True))

    @property
    def invariant_failures(self) -> int:
        return sum(1 for g in self.results for it in g["items"]
                   if it.get("invariant") is not None and it.get("holds") is False)

    @property
    def errors(self) -> int:
        return sum(1 for g in self.results for it in g["items"] if it.get("status") == "error")

    @property
    def exit_code(self) -> int:
        return 1 if self.violations or self.invariant_failures else 0

    def to_json(self, timings: bool = True) -> dict[str, Any]:
        out = {
            "config_hash": self.config_hash,
            "tool_version": self.tool_version,
            "summary": {"violations": self.violations,
                        "invariant_failures": self.invariant_failures,
                        "item_errors": self.errors},
            "results": self.results,
        }
        if timings:
            out["timings"] = self.timings
        return out

    def rows(self) -> list[dict[str, Any]]:
        out = []
        for g in self.results:
            for it in g["items"]:
                for row in it.get("rows", []):
                    out.append({"graph": g["graph"], "n": g["n"], "m": g["m"],
                                "chi": g.get("chi"), "alpha": g.get("alpha"), **row})
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in self.rows():
            w.writerow({c: "" if row.get(c) is None else row.get(c) for c in CSV_COLUMNS})
        return buf.getvalue()


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def validate_config(config: dict) -> None:
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    graphs = config.get("graphs", "corpus")
    if graphs != "corpus" and not isinstance(graphs, list):
        raise ConfigError("'graphs' must be \"corpus\" or a list of graph sources")
    for op in config.get("operations", DEFAULT_OPERATIONS):
        if "op" not in op:
            raise ConfigError(f"operation without 'op': {op!r}")
        if "p" in op and not isinstance(op["p"], (str, int)) and op["op"] != "mc_tail":
            raise ConfigError(f"p must be a rational string such as '1/2': {op!r}")
        if "seed" in op and not 0 <= int(op["seed"]) < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")


def _as_list(x) -> list:
    return list(x) if isinstance(x, (list, tuple)) else [x]


def _frac_json(x: Fraction) -> dict[str, Any]:
    return {"exact": str(x), "decimal": float(x)}


def _bound_item(op: str, report: B.BoundReport, empirical, p, d, quantity: str) -> dict[str, Any]:
    compared = B.compare(report, empirical, quantity if quantity == report.quantity else None)
    counted = report.preconditions_met
    return {
        "op": op,
        "bound": compared.to_json(),
        "verdict": compared.verdict,
        "counted": counted,
        "rows": [{"p": p, "d": d, "quantity": quantity, "value": str(empirical),
                  "bound_name": report.name, "bound_log2": report.log2_value,
                  "verdict": compared.verdict if counted else "not_applicable"}],
    }


def _invariant(name: str, holds: bool, **info) -> dict[str, Any]:
    return {"op": "invariant", "invariant": name, "holds": bool(holds), **info,
            "rows": [{"quantity": f"invariant:{name}", "value": int(bool(holds)),
                      "verdict": "holds" if holds else "violated"}]}


class _Context:
    def __init__(self, name: str, G: Graph, caps: dict[str, int]):
        self.name, self.G, self.caps = name, G, caps
        self._chi: int | None = None
        self._alpha: int | None = None
        self._dist: dict[Fraction, Any] = {}
        self._mono: dict[int, int] = {}

    @property
    def chi(self) -> int:
        if self._chi is None:
            self._chi = chromatic_number(self.G).value
        return self._chi

    @property
    def alpha(self) -> int:
        if self._alpha is None:
            self._alpha = independence_number(self.G).value
        return self._alpha

    def dist(self, p: Fraction):
        if p not in self._dist:
            self._dist[p] = exact_chi_distribution(self.G, p, self.caps["exact_edges"])
        return self._dist[p]

    def mono(self, c: int) -> int:
        if c not in self._mono:
            self._mono[c] = min_monochromatic_edges(self.G, c).value
        return self._mono[c]


def _op_chi(ctx: _Context, op: dict) -> list[dict]:
    return [{"op": "chi", "value": ctx.chi, "rows": [{"quantity": "chi", "value": ctx.chi}]}]


def _op_alpha(ctx: _Context, op: dict) -> list[dict]:
    return [{"op": "alpha", "value": ctx.alpha, "rows": [{"quantity": "alpha", "value": ctx.alpha}]}]


def _op_mono(ctx: _Context, op: dict) -> list[dict]:
    out = []
    for c in _as_list(op.get("c", [2])):
        v = ctx.mono(int(c))
        out.append({"op": "mono", "c": c, "value": v,
                    "rows": [{"d": c, "quantity": "min_monochromatic_edges", "value": v}]})
    return out


def _op_hadwiger(ctx: _Context, op: dict) -> list[dict]:
    res = hadwiger_number(ctx.G, ctx.caps["hadwiger_vertices"])
    return [{"op": "hadwiger", "value": res.value, "witness": res.witness,
             "rows": [{"quantity": "hadwiger", "value": res.value}]}]


def _op_critical(ctx: _Context, op: dict) -> list[dict]:
    H = critical_subgraph(ctx.G)
    k = ctx.chi
    item = {"op": "critical", "n": H.n, "m": H.m, "edges": [list(e) for e in H.edges],
            "rows": [{"quantity": "critical_edges", "value": H.m}]}
    min_deg = min(H.degrees()) if H.n else 0
    return [
        item,
        _invariant("claim_edges_at_least_k_choose_2", H.m >= math.comb(k, 2), m=H.m, k=k),
        _invariant("critical_min_degree", H.n <= 1 or min_deg >= k - 1, min_degree=min_deg, k=k),
        _invariant("critical_is_critical", is_critical(H, k)),
    ]


def _op_exact_tail(ctx: _Context, op: dict) -> list[dict]:
    p = parse_probability(op.get("p", "1/2"))
    dist = ctx.dist(p)
    out = []
    for d in _as_list(op.get("d", [2])):
        tail = dist.tail(int(d))
        out.append({"op": "exact_tail", "p": str(p), "d": d, "value": _frac_json(tail),
                    "rows": [{"p": str(p), "d": d, "quantity": "exact_tail", "value": str(tail)}]})
    return out


def _op_distribution(ctx: _Context, op: dict) -> list[dict]:
    p = parse_probability(op.get("p", "1/2"))
    dist = ctx.dist(p)
    e = dist.expectation()
    return [{"op": "distribution", **dist.to_json(), "expectation": _frac_json(e),
             "rows": [{"p": str(p), "quantity": "expected_chi", "value": str(e)}]}]


def _op_mc_tail(ctx: _Context, op: dict) -> list[dict]:
    p = op.get("p", "1/2")
    out = []
    for d in _as_list(op.get("d", [2])):
        est = mc_tail(ctx.G, p, int(d), int(op.get("trials", 10000)), int(op.get("seed", 0)),
                      float(op.get("confidence", 0.95)), op.get("workers"))
        out.append({"op": "mc_tail", "p": str(p), "d": d, "estimate": est.to_json(),
                    "rows": [{"p": str(p), "d": d, "quantity": "mc_tail", "value": est.point}]})
    return out


def _op_frankl(ctx: _Context, op: dict) -> list[dict]:
    out = []
    for d in _as_list(op.get("d", [1, 2])):
        rep = frankl_check(ctx.G, int(d), ctx.caps["partition_vertices"])
        out.append({"op": "frankl", "d": d, "bound": rep.to_json(), "verdict": rep.verdict,
                    "rows": [{"p": "1/2", "d": d, "quantity": "closure_fraction",
                              "value": rep.compared_against["empirical"]["exact"],
                              "bound_name": rep.name, "bound_log2": rep.log2_value,
                              "verdict": rep.verdict}]})
        out.append(_invariant("three_wise_intersection", rep.details["intersection_claim_holds"],
                              d=d, t_star=rep.details["t_star"], t_d3=rep.details["t_d3"]))
    return out


def _op_product_bound(ctx: _Context, op: dict) -> list[dict]:
    ok, bad = check_product_bound(ctx.G, ctx.caps["exact_edges"])
    return [_invariant("product_bound", ok, counterexample=None if bad is None else bad.edges())]


def _op_verify(ctx: _Context, op: dict) -> list[dict]:
    """The bound-versus-exact battery at p = 1/2."""
    G, k = ctx.G, ctx.chi
    half = Fraction(1, 2)
    out: list[dict] = []
    dist = ctx.dist(half)
    ds = [int(d) for d in _as_list(op.get("d", [1, 2, 3]))]
    for d in ds:
        tail = dist.tail(d)
        out.append({"op": "exact_tail", "p": "1/2", "d": d, "value": _frac_json(tail),
                    "rows": [{"p": "1/2", "d": d, "quantity": "exact_tail", "value": str(tail)}]})
        if d <= k <= G.n:
            out.append(_bound_item("verify", B.union_tail_bound(G.n, k, d), tail, "1/2", d, "exact_tail"))
        t = ctx.mono(d**3)
        out.append(_bound_item("verify", B.frankl_tail_bound(t), tail, "1/2", d, "exact_tail"))
        if d**3 <= k:
            out.append(_bound_item("verify", B.thm_item2_bound(k, d), tail, "1/2", d, "exact_tail"))
        if G.n == k and G.m == math.comb(k, 2):
            out.append(_bound_item("verify", B.er_tail_bound(k, d), tail, "1/2", d, "exact_tail"))
        if G.n:
            C = ctx.alpha * k / G.n
            rep = B.alpha_tail_bound(G.n, k, C, 0.5, d)
            out.append(_bound_item("verify", rep, tail, "1/2", d, "exact_tail"))
        out.append(_invariant("tail_monotone_in_d", tail <= dist.tail(d + 1), d=d))
        if G.n <= ctx.caps["partition_vertices"] and G.m <= ctx.caps["closure_edges"]:
            fam = uncut_family(G, d, ctx.caps["partition_vertices"])
            out.append(_invariant("closure_identity", closure_fraction(fam) == tail, d=d))
            t3 = min_r_wise_intersection(fam, 3)
            out.append(_invariant("three_wise_intersection", t3 >= t, d=d, t_star=t3, t_d3=t))
    for c in range(1, k):
        lhs = ctx.mono(c)
        out.append(_invariant("mono_counting_bound", Fraction(lhs) >= Fraction(k * (k - c), 2 * c),
                              c=c, value=lhs))
    out.append(_invariant("chi_alpha_at_least_n", k * ctx.alpha >= G.n))
    out.append(_invariant("edges_at_least_k_choose_2", G.m >= math.comb(k, 2)))
    e = dist.expectation()
    for rep in B.expectation_lower_bounds(k):
        out.append(_bound_item("verify", rep, e, "1/2", None, "expected_chi"))
    out.extend(_op_product_bound(ctx, op))
    return out


OPERATIONS = {
    "chi": _op_chi,
    "alpha": _op_alpha,
    "mono": _op_mono,
    "hadwiger": _op_hadwiger,
    "critical": _op_critical,
    "exact_tail": _op_exact_tail,
    "distribution": _op_distribution,
    "expected_chi": _op_distribution,
    "mc_tail": _op_mc_tail,
    "frankl": _op_frankl,
    "product_bound": _op_product_bound,
    "verify": _op_verify,
}


def _run_graph(name: str, G: Graph, operations: list[dict], caps: dict[str, int]):
    ctx = _Context(name, G, caps)
    items: list[dict] = []
    timings: dict[str, float] = {}
    for i, op in enumerate(operations):
        fn = OPERATIONS.get(op["op"])
        t0 = time.perf_counter()
        if fn is None:
            items.append({"op": op["op"], "status": "error", "error": f"unknown operation {op['op']!r}"})
            continue
        try:
            produced = fn(ctx, op)
            for it in produced:
                it.setdefault("status", "ok")
            items.extend(produced)
        except ITEM_ERRORS as exc:
            items.append({"op": op["op"], "status": "error", "error": f"{type(exc).__name__}: {exc}"})
        timings[f"{name}/{i}:{op['op']}"] = time.perf_counter() - t0
    head = {"graph": name, "n": G.n, "m": G.m}
    try:
        head["chi"] = ctx.chi
        head["alpha"] = ctx.alpha
    except ITEM_ERRORS:
        pass
    return {**head, "items": items}, timings


def run(config: dict, workers: int | None = None) -> RunRecord:
    validate_config(config)
    caps = {"exact_edges": EXACT_EDGE_CAP, "partition_vertices": PARTITION_CAP,
            "closure_edges": CLOSURE_CAP, "hadwiger_vertices": HADWIGER_CAP}
    caps.update(config.get("caps", {}))
    graphs = config.get("graphs", "corpus")
    resolved: list[tuple[str, Graph | None, str | None]] = []
    if graphs == "corpus":
        resolved = [(n, G, None) for n, G in builtin_corpus().items()]
    else:
        for src in graphs:
            try:
                name, G = resolve(src)
                resolved.append((name, G, None))
            except (ValueError, OSError) as exc:
                resolved.append((str(src), None, f"{type(exc).__name__}: {exc}"))
    operations = config.get("operations", DEFAULT_OPERATIONS)

    def job(entry):
        name, G, err = entry
        if G is None:
            return {"graph": name, "n": None, "m": None,
                    "items": [{"op": "resolve", "status": "error", "error": err}]}, {}
        return _run_graph(name, G, operations, caps)

    t0 = time.perf_counter()
    workers = workers or thread_count()
    if workers > 1 and len(resolved) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            done = list(pool.map(job, resolved))
    else:
        done = [job(e) for e in resolved]
    timings: dict[str, float] = {}
    for _, t in done:
        timings.update(t)
    timings["total"] = time.perf_counter() - t0
    return RunRecord(config_hash(config), __version__, [r for r, _ in done], timings)


def write_outputs(record: RunRecord, json_path: str | None = None, csv_path: str | None = None) -> None:
    if json_path:
        with open(json_path, "w") as fh:
            json.dump(record.to_json(), fh, indent=2, default=str)
    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            fh.write(record.to_csv())
