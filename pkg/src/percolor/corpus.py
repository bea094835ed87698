"""Named graphs and the small source language used by the CLI and configs.

A graph source is one of

* a builtin corpus name (``"C5"``, ``"Petersen"``, ``"K4+P3"`` ...),
* a shorthand: ``K7``, ``C9``, ``P4`` (path), ``K2,2,2`` (complete multipartite),
  ``E5`` (edgeless), ``gnp:20,1/2,7`` (n, p, seed), ``clique_path:5,3``,
* a path to a DIMACS file,
* in configs, a mapping with ``gen`` + parameters or ``dimacs: path``.
"""

from __future__ import annotations

import os
import re
from fractions import Fraction

from . import graph as g
from .graph import Graph, GraphError


def builtin_corpus() -> dict[str, Graph]:
    """The fixed verification corpus, in a stable order."""
    corpus = {f"K{k}": g.complete(k) for k in range(2, 7)}
    for n in (3, 5, 7, 6):
        corpus[f"C{n}"] = g.cycle(n)
    corpus["K2,2,2"] = g.complete_multipartite([2, 2, 2])
    corpus["Petersen"] = g.petersen()
    corpus["K4+P3"] = g.clique_with_path(4, 3)
    corpus["K5+K1"] = g.disjoint_union(g.complete(5), g.empty(1))
    return corpus


_SHORT = re.compile(r"^([KCPE])(\d+)$")


def _number(text: str) -> float | Fraction:
    return Fraction(text) if "/" in text else float(text)


def generate(kind: str, **params) -> Graph:
    kind = kind.lower()
    if kind in ("complete", "clique"):
        return g.complete(int(params["k"]))
    if kind == "cycle":
        return g.cycle(int(params["n"]))
    if kind == "path":
        return g.path(int(params["n"]))
    if kind == "empty":
        return g.empty(int(params["n"]))
    if kind in ("multipartite", "complete_multipartite"):
        return g.complete_multipartite([int(s) for s in params["sizes"]])
    if kind == "petersen":
        return g.petersen()
    if kind == "gnp":
        p = params["p"]
        p = float(Fraction(p)) if isinstance(p, str) else float(p)
        return g.gnp(int(params["n"]), p, int(params.get("seed", 0)))
    if kind in ("clique_path", "clique_with_path"):
        return g.clique_with_path(int(params["k"]), int(params["length"]))
    raise GraphError(f"unknown generator {kind!r}")


def resolve(source) -> tuple[str, Graph]:
    """(display name, graph) for a graph source."""
    if isinstance(source, Graph):
        return f"graph(n={source.n},m={source.m})", source
    if isinstance(source, dict):
        spec = dict(source)
        name = spec.pop("name", None)
        if "dimacs" in spec:
            path = spec["dimacs"]
            return name or os.path.basename(path), g.read_dimacs(path)
        if "gen" not in spec:
            raise GraphError(f"graph entry needs 'gen' or 'dimacs': {source!r}")
        kind = spec.pop("gen")
        G = generate(kind, **spec)
        label = name or kind + "(" + ",".join(f"{k}={v}" for k, v in sorted(spec.items())) + ")"
        return label, G
    text = str(source).strip()
    corpus = builtin_corpus()
    if text in corpus:
        return text, corpus[text]
    lowered = {k.lower(): k for k in corpus}
    if text.lower() in lowered:
        key = lowered[text.lower()]
        return key, corpus[key]
    if os.path.exists(text):
        return os.path.basename(text), g.read_dimacs(text)
    m = _SHORT.match(text)
    if m:
        tag, size = m.group(1), int(m.group(2))
        maker = {"K": g.complete, "C": g.cycle, "P": g.path, "E": g.empty}[tag]
        return text, maker(size)
    if re.fullmatch(r"K\d+(,\d+)+", text):
        return text, g.complete_multipartite([int(x) for x in text[1:].split(",")])
    if ":" in text:
        kind, _, args = text.partition(":")
        vals = [a.strip() for a in args.split(",") if a.strip()]
        kind = kind.lower()
        if kind == "gnp":
            n, p, *rest = vals
            return text, g.gnp(int(n), float(_number(p)), int(rest[0]) if rest else 0)
        if kind in ("clique_path", "clique_with_path"):
            return text, g.clique_with_path(int(vals[0]), int(vals[1]))
        if kind in ("multipartite", "complete_multipartite"):
            return text, g.complete_multipartite([int(v) for v in vals])
        if kind in ("complete", "cycle", "path", "empty"):
            key = "k" if kind == "complete" else "n"
            return text, generate(kind, **{key: vals[0]})
    raise GraphError(f"cannot resolve graph source {text!r}")
