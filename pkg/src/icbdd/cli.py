"""Command-line entry point: ``icbdd <subcommand> GRAPH [options]``.

Exit status is 0 on success, 1 on usage or input errors, 2 when a node limit
aborts construction.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from decimal import Decimal, localcontext

import numpy as np

from .bdd import DEFAULT_NODE_LIMIT, NodeBudgetExceeded
from .frontier import ConnectivityForest
from .graph import GraphFormatError, ProbGraph, load_graph
from .maximize import greedy
from .oracle import monte_carlo_spread
from .ordering import beam_search_order, load_order, save_order
from .spread import (ImpossibleEvidence, conditional_spread, evidence_root, influence_spread,
                     sample_edges, spread_gradient)

EXIT_USAGE = 1
EXIT_RESOURCE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def sci(value) -> str:
    """``2.2e+07`` style rendering of an arbitrarily large int or Decimal."""
    with localcontext() as ctx:
        ctx.prec = 50
        d = Decimal(value)
        if d == 0:
            return "0.0e+00"
        mant, _, exp = f"{d:.1e}".partition("e")
        sign = exp[0] if exp[0] in "+-" else "+"
        return f"{mant}e{sign}{int(exp.lstrip('+-')):02d}"


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("graph", help="edge-list file ('-' for stdin)")
    p.add_argument("--undirected", action="store_true", help="each line yields both directions")
    p.add_argument("--default-prob", type=float, default=None,
                   help="probability for lines without one")
    p.add_argument("--prob", type=float, default=None, help="override every edge probability")
    p.add_argument("--beam-width", type=int, default=100)
    p.add_argument("--order-seed", type=int, default=0)
    p.add_argument("--order-file", default=None,
                   help="edge order to load (the order subcommand writes it instead)")
    p.add_argument("--node-limit", type=int, default=DEFAULT_NODE_LIMIT)
    prune = p.add_mutually_exclusive_group()
    prune.add_argument("--no-prune", action="store_true", help="skip edge pruning")
    prune.add_argument("--prune-weak", action="store_true",
                       help="reachability-based pruning instead of simple-path enumeration")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="icbdd", description="Exact influence spread via BDDs")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("stats", help="build all s-t diagrams and report sizes")
    _common(p)
    p.add_argument("--no-timing", action="store_true", help="omit timings (byte-stable output)")
    p.add_argument("--pairs", action="store_true", help="include per-pair rows in JSON")

    p = sub.add_parser("spread", help="exact influence spread of a seed set")
    _common(p)
    p.add_argument("--seeds", required=True)

    p = sub.add_parser("maximize", help="greedy influence maximization")
    _common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--no-timing", action="store_true")

    p = sub.add_parser("sample", help="rejection-free realizations reaching a target")
    _common(p)
    p.add_argument("--seeds", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--positives", default="")
    p.add_argument("--negatives", default="")

    p = sub.add_parser("conditional", help="spread conditioned on observed vertices")
    _common(p)
    p.add_argument("--seeds", required=True)
    p.add_argument("--positives", default="")
    p.add_argument("--negatives", default="")

    p = sub.add_parser("gradient", help="derivatives of the spread w.r.t. edge probabilities")
    _common(p)
    p.add_argument("--seeds", required=True)
    p.add_argument("--target", default=None)

    p = sub.add_parser("compare", help="Monte-Carlo estimates against the exact spread")
    _common(p)
    p.add_argument("--seeds", required=True)
    p.add_argument("--samples", default="1000,100000",
                   help="comma-separated sample counts")
    p.add_argument("--repeats", type=int, default=1)

    p = sub.add_parser("order", help="compute the global edge order")
    _common(p)
    return parser


def _labels(g: ProbGraph, text: str) -> list[int]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            out.append(g.index(tok))
        except KeyError:
            raise UsageError(f"unknown vertex label {tok!r}") from None
    return out


def _load(args) -> ProbGraph:
    if args.graph == "-":
        text = sys.stdin.buffer.read()
    else:
        try:
            with open(args.graph, "rb") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read graph: {exc}") from None
    default = args.default_prob if args.default_prob is not None else args.prob
    g = load_graph(text, undirected=args.undirected, default_prob=default)
    if args.prob is not None:
        if not (0.0 <= args.prob <= 1.0):
            raise UsageError(f"probability out of range: {args.prob}")
        g = g.with_probs([args.prob] * g.m)
    return g


def _order(args, g):
    if args.order_file and args.command != "order":
        return load_order(g, args.order_file)
    return beam_search_order(g, args.beam_width, args.order_seed)


def _forest(args, g) -> ConnectivityForest:
    prune = "none" if args.no_prune else "weak" if args.prune_weak else "simpath"
    return ConnectivityForest(g, _order(args, g), prune=prune, node_limit=args.node_limit)


def _edge_label(g: ProbGraph, e: int) -> str:
    return f"{g.labels[g.tails[e]]}->{g.labels[g.heads[e]]}"


def _emit(out, rows: list[dict], fmt: str, doc=None) -> None:
    if fmt == "json":
        json.dump(doc if doc is not None else rows, out, indent=2)
        out.write("\n")
        return
    if not rows:
        return
    writer = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


def cmd_stats(args, g, out):
    forest = _forest(args, g)
    pairs = []
    for s in range(g.n):
        for t in range(g.n):
            if s == t:
                continue
            ref = forest.single(s, t)
            pairs.append({"s": g.labels[s], "t": g.labels[t], "size": forest.store.size(ref),
                          "cardinality": str(forest.store.count(ref)),
                          "time_ms": forest.build_seconds[(s, t)] * 1e3})
    npairs = len(pairs)
    total_card = sum(int(p["cardinality"]) for p in pairs)
    summary = {
        "vertices": g.n,
        "edges": g.m,
        "width": forest.order.width,
        "pairs": npairs,
        "time_ms": sum(p["time_ms"] for p in pairs) / npairs if npairs else 0.0,
        "bdd_size": sum(p["size"] for p in pairs) / npairs if npairs else 0.0,
        "sum_size": sum(p["size"] for p in pairs),
        "shared_size": forest.shared_size(),
        "cardinality": sci(Decimal(total_card) / npairs) if npairs else "0.0e+00",
        "total_cardinality": str(total_card),
    }
    if args.no_timing:
        del summary["time_ms"]
        for p in pairs:
            del p["time_ms"]
    if args.format == "csv":
        _emit(out, [summary], "csv")
    else:
        doc = {"summary": summary}
        if args.pairs:
            doc["pairs"] = pairs
        _emit(out, [], "json", doc)


def cmd_spread(args, g, out):
    forest = _forest(args, g)
    res = influence_spread(forest, _labels(g, args.seeds))
    rows = [{"target": g.labels[t], "probability": p} for t, p in res.per_target.items()]
    _emit(out, rows, args.format, res.to_json(g.labels))


def cmd_conditional(args, g, out):
    forest = _forest(args, g)
    res = conditional_spread(forest, _labels(g, args.seeds), _labels(g, args.positives),
                             _labels(g, args.negatives))
    doc = res.to_json(g.labels)
    doc["conditional"] = {"positives": [g.labels[v] for v in _labels(g, args.positives)],
                          "negatives": [g.labels[v] for v in _labels(g, args.negatives)]}
    rows = [{"target": g.labels[t], "probability": p} for t, p in res.per_target.items()]
    _emit(out, rows, args.format, doc)


def cmd_gradient(args, g, out):
    forest = _forest(args, g)
    seeds = _labels(g, args.seeds)
    target = _labels(g, args.target)[0] if args.target else None
    grad = spread_gradient(forest, seeds, target=target)
    res = influence_spread(forest, seeds)
    doc = res.to_json(g.labels)
    doc["gradients"] = {_edge_label(g, e): d for e, d in enumerate(grad)}
    rows = [{"edge": _edge_label(g, e), "derivative": d} for e, d in enumerate(grad)]
    _emit(out, rows, args.format, doc)


def cmd_sample(args, g, out):
    forest = _forest(args, g)
    seeds = _labels(g, args.seeds)
    target = _labels(g, args.target)
    if len(target) != 1:
        raise UsageError("--target takes exactly one vertex")
    evidence = evidence_root(forest, tuple(sorted(set(seeds))), _labels(g, args.positives),
                             _labels(g, args.negatives))
    rng = np.random.default_rng(args.rng_seed)
    draws = sample_edges(forest, seeds, target[0], args.count, rng, evidence=evidence)
    samples = [[_edge_label(g, e) for e in sorted(d)] for d in draws]
    doc = {"seeds": [g.labels[s] for s in seeds], "target": g.labels[target[0]],
           "samples": samples}
    rows = [{"sample": i, "edges": " ".join(s)} for i, s in enumerate(samples)]
    _emit(out, rows, args.format, doc)


def cmd_maximize(args, g, out):
    forest = _forest(args, g)
    if not (1 <= args.k <= g.n):
        raise UsageError(f"--k must lie in 1..{g.n}")
    trace = greedy(forest, args.k)
    rows = trace.to_rows(g.labels)
    if args.no_timing:
        for r in rows:
            del r["time"]
    doc = {"seeds": [r["vertex"] for r in rows], "trace": rows}
    if trace.error:
        doc["error"] = trace.error
    _emit(out, rows, args.format, doc)
    if trace.error:
        raise NodeBudgetExceeded(trace.error)


def cmd_compare(args, g, out):
    forest = _forest(args, g)
    seeds = _labels(g, args.seeds)
    exact = influence_spread(forest, seeds).sigma
    try:
        counts = [int(x) for x in args.samples.split(",") if x.strip()]
    except ValueError:
        raise UsageError("--samples must be comma-separated integers") from None
    rows = []
    for n_samples in counts:
        for rep in range(args.repeats):
            est, se = monte_carlo_spread(g, seeds, n_samples, seed=args.rng_seed + rep,
                                         workers=args.threads)
            rows.append({"N": n_samples, "repeat": rep, "estimate": est, "exact": exact,
                         "error": est - exact, "stderr": None if se != se else se})
    _emit(out, rows, args.format, {"seeds": [g.labels[s] for s in seeds], "rows": rows})


def cmd_order(args, g, out):
    order = beam_search_order(g, args.beam_width, args.order_seed)
    if args.order_file:
        save_order(order, args.order_file)
    rows = [{"position": i, "edge": e, "tail": g.labels[g.tails[e]], "head": g.labels[g.heads[e]],
             "frontier": len(w)} for i, (e, w) in enumerate(zip(order.perm, order.frontiers), 1)]
    doc = {"width": order.width, "perm": list(order.perm),
           "edges": [_edge_label(g, e) for e in order.perm]}
    _emit(out, rows, args.format, doc)


COMMANDS = {
    "stats": cmd_stats,
    "spread": cmd_spread,
    "maximize": cmd_maximize,
    "sample": cmd_sample,
    "conditional": cmd_conditional,
    "gradient": cmd_gradient,
    "compare": cmd_compare,
    "order": cmd_order,
}


def run(argv=None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"icbdd: error: {exc}", file=err)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=err)
    try:
        g = _load(args)
        buf = io.StringIO()
        COMMANDS[args.command](args, g, buf)
        out.write(buf.getvalue())
    except NodeBudgetExceeded as exc:
        if args.command == "maximize":
            out.write(buf.getvalue())
        print(f"icbdd: resource limit: {exc}", file=err)
        return EXIT_RESOURCE
    except (UsageError, GraphFormatError, ImpossibleEvidence, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"icbdd: error: {msg}", file=err)
        return EXIT_USAGE
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
