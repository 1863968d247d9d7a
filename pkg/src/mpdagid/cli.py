"""Command-line front end.

Subcommands: close, identify, factorize, adjust, enumerate, verify,
estimate.  Exit codes: 0 on success, 1 for usage or input errors, 2 for
a valid negative answer (not identifiable, not truncatable, no
adjustment set).  Output is deterministic for a fixed seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import estimate, meek, oracle
from .formula import render
from .graphs import GraphError, Pdag, parse_graph
from .identify import (
    NotTruncatableError,
    find_adjustment_set,
    identify,
    truncated_factorization,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits 2 by default; usage errors are 1
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    top = _Parser(prog="mpdagid", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, help_text, *, xy=False, fmt=False, data=False, seed=False, models=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-g", "--graph", required=True, help="edge-list file")
        p.add_argument("-b", "--bk", help="background knowledge file (directed lines)")
        if xy:
            p.add_argument("-X", required=True, help="comma-separated treatment nodes")
            p.add_argument("-Y", required=True, help="comma-separated response nodes")
        if fmt:
            p.add_argument(
                "--format", choices=("text", "latex", "json"), default="text"
            )
        if data:
            p.add_argument("--data", required=True, help="CSV file of observations")
        if seed:
            p.add_argument("--seed", type=int, default=0)
        if models:
            p.add_argument("--models", type=int, default=20, help="random models per check")
        return p

    add("close", "close a PDAG plus background knowledge into an MPDAG")
    add("identify", "decide identifiability and print the formula", xy=True, fmt=True)
    p = sub.add_parser("factorize", help="truncated factorization with respect to X")
    p.add_argument("-g", "--graph", required=True)
    p.add_argument("-b", "--bk")
    p.add_argument("-X", default="", help="comma-separated treatment nodes (may be empty)")
    p.add_argument("--format", choices=("text", "latex", "json"), default="text")
    add("adjust", "search for a generalized adjustment set", xy=True)
    add("enumerate", "list every DAG represented by the MPDAG")
    add("verify", "cross-check identification against brute force", xy=True, seed=True, models=True)
    add("estimate", "estimate the effect from Gaussian data", xy=True, data=True)
    return top


def _load_graph(args) -> Pdag:
    with open(args.graph, encoding="utf-8") as fh:
        g = parse_graph(fh.read())
    bk = frozenset()
    if getattr(args, "bk", None):
        with open(args.bk, encoding="utf-8") as fh:
            bk = meek.parse_background_knowledge(fh.read())
    # Analysis commands operate on the closure; closing an MPDAG with no
    # extra knowledge is the identity.
    return meek.close(g, bk)


def _nodes(arg: str) -> frozenset[str]:
    return frozenset(n for n in (s.strip() for s in arg.split(",")) if n)


def _fmt(x: float) -> str:
    return f"{x:.3e}"


def _cmd_close(args) -> int:
    sys.stdout.write(_load_graph(args).to_edgelist())
    return 0


def _cmd_identify(args) -> int:
    g = _load_graph(args)
    res = identify(g, _nodes(args.X), _nodes(args.Y))
    if not res.identifiable:
        print("not identifiable")
        print("witness:", _render_path(g, res.witness), file=sys.stderr)
        return 2
    print(render(res.formula, args.format))
    return 0


def _cmd_factorize(args) -> int:
    g = _load_graph(args)
    try:
        f = truncated_factorization(g, _nodes(args.X))
    except NotTruncatableError as exc:
        print("not truncatable")
        print(exc, file=sys.stderr)
        return 2
    print(render(f, args.format))
    return 0


def _cmd_adjust(args) -> int:
    g = _load_graph(args)
    res = find_adjustment_set(g, _nodes(args.X), _nodes(args.Y))
    if res.status == "zero_effect":
        print("zero effect: response is a parent of the treatment")
        return 0
    if res.status == "set_found":
        members = ",".join(sorted(res.adjustment)) if res.adjustment else "(empty)"
        print(f"adjustment set: {members}")
        return 0
    print("no adjustment set exists")
    print(f"reason: {res.reason}", file=sys.stderr)
    return 2


def _cmd_enumerate(args) -> int:
    g = _load_graph(args)
    dags = oracle.enumerate_dags(g)
    print(len(dags))
    for d in dags:
        print()
        sys.stdout.write(d.to_edgelist())
    return 0


def _render_path(g: Pdag, path) -> str:
    parts = [path[0]]
    for u, w in zip(path, path[1:]):
        if g.has_directed(u, w):
            parts.append(f"-> {w}")
        elif g.has_directed(w, u):
            parts.append(f"<- {w}")
        else:
            parts.append(f"-- {w}")
    return " ".join(parts)


def _cmd_verify(args) -> int:
    g = _load_graph(args)
    xs, ys = _nodes(args.X), _nodes(args.Y)
    res = identify(g, xs, ys)
    if res.identifiable:
        report = oracle.cross_dag_agreement(
            g, xs, ys, res.formula, n_models=args.models, seed=args.seed
        )
        print("identifiable:", render(res.formula, "text"))
        print("dags:", report.n_dags)
        print("max cross-dag deviation:", _fmt(report.max_cross_dag_tv))
        print("max formula deviation:", _fmt(report.max_formula_tv))
        if max(report.max_cross_dag_tv, report.max_formula_tv) > 1e-9:
            print("verification failed: deviation exceeds 1e-9", file=sys.stderr)
            return 1
        return 0
    m1, m2, delta = oracle.nonid_witness(g, xs, ys)
    _, c1 = oracle.wright_cov(m1)
    _, c2 = oracle.wright_cov(m2)
    cov_diff = float(abs(c1 - c2).max())
    print("not identifiable")
    print("witness:", _render_path(g, res.witness))
    print("covariance max diff:", _fmt(cov_diff))
    print("interventional mean gap (delta):", _fmt(delta))
    if cov_diff > 1e-12 or delta <= 0:
        print("verification failed: witness models disagree observationally", file=sys.stderr)
        return 1
    return 0


def _cmd_estimate(args) -> int:
    g = _load_graph(args)
    xs_order = [s.strip() for s in args.X.split(",") if s.strip()]
    ys = _nodes(args.Y)
    res = identify(g, frozenset(xs_order), ys)
    if not res.identifiable:
        print("not identifiable")
        print("witness:", _render_path(g, res.witness), file=sys.stderr)
        return 2
    with open(args.data, encoding="utf-8") as fh:
        data = estimate.Dataset.from_csv(fh.read())
    effect = estimate.gaussian_effect(res.formula, data, xs_order, ys)
    payload = {
        "response": sorted(ys)[0],
        "effect": {x: float(v) for x, v in zip(xs_order, effect)},
    }
    print(json.dumps(payload, sort_keys=True))
    return 0


_COMMANDS = {
    "close": _cmd_close,
    "identify": _cmd_identify,
    "factorize": _cmd_factorize,
    "adjust": _cmd_adjust,
    "enumerate": _cmd_enumerate,
    "verify": _cmd_verify,
    "estimate": _cmd_estimate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except FileNotFoundError as exc:
        print(f"mpdagid: {exc.strerror}: {exc.filename}", file=sys.stderr)
        return 1
    except (GraphError, estimate.EstimationError, oracle.DegenerateConditioningError) as exc:
        print(f"mpdagid: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
