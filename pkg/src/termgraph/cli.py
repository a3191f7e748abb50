"""Command-line front end.

Exit codes: 0 success, 1 no matching, 2 validation failure, 3 parse error,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence, TextIO, Tuple

from .engine import Strategy, normalize, rewrite_step
from .errors import InvariantError, ParseError, ValidationError
from .graph import Signature, TermGraph, validate_graph
from .matching import find_matchings
from .pushout import build_result
from .rules import RewriteRule
from .textio import Workspace, parse_graph, parse_workspace, render_graph
from .verify import (BudgetError, Cone, MediationError, brute_force_initiality,
                     check_cone, harness_cones, mediating_morphism)

EXIT_OK, EXIT_NO_MATCH, EXIT_INVALID, EXIT_PARSE, EXIT_INTERNAL = range(5)


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        self.code = code
        self.message = message


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Exit(EXIT_PARSE, f"{path}: {exc.strerror}") from exc


def _workspace(path: str) -> Workspace:
    try:
        return parse_workspace(_read(path))
    except ParseError as exc:
        raise _Exit(EXIT_PARSE, f"{path}:{exc}") from exc
    except ValidationError as exc:
        raise _Exit(EXIT_INVALID, f"{path}: {exc}") from exc


def _graph(path: str) -> TermGraph:
    try:
        return parse_graph(_read(path))
    except ParseError as exc:
        raise _Exit(EXIT_PARSE, f"{path}:{exc}") from exc
    except ValidationError as exc:
        raise _Exit(EXIT_INVALID, f"{path}: {exc}") from exc


def _combined_signature(ws: Workspace, g: TermGraph) -> Signature:
    if ws.pinned:
        report = validate_graph(g, ws.signature)
        if report:
            raise _Exit(EXIT_INVALID, "graph: " + "; ".join(map(str, report)))
        return ws.signature
    graphs = [g, *ws.graphs.values()]
    for t in ws.rules:
        graphs += [t.lhs, t.rhs]
    try:
        return Signature.infer(graphs)
    except ValueError as exc:
        raise _Exit(EXIT_INVALID, f"rules and graph disagree: {exc}") from exc


def _rule_and_graph(args) -> Tuple[Workspace, RewriteRule, TermGraph, Signature]:
    ws = _workspace(args.rules)
    g = _graph(args.graph)
    sig = _combined_signature(ws, g)
    try:
        t = ws.rule(args.rule)
    except KeyError:
        names = ", ".join(r.name for r in ws.rules)
        raise _Exit(EXIT_INVALID, f"no rule named {args.rule!r} (have: {names})")
    return ws, t, g, sig


def _fmt_map(f) -> str:
    return ", ".join(f"{k}->{f[k]}" for k in sorted(f))


def _pick(t: RewriteRule, g: TermGraph, k: int):
    ms = find_matchings(t, g)
    if not ms:
        raise _Exit(EXIT_NO_MATCH, f"rule {t.name}: no matching in the graph "
                                   "(a valid matching may only identify nodes whose "
                                   "tau images are clones of one node)")
    if not 0 <= k < len(ms):
        raise _Exit(EXIT_NO_MATCH, f"rule {t.name}: matching {k} requested, "
                                   f"only {len(ms)} available")
    return ms[k]


def cmd_check(args, out: TextIO, err: TextIO) -> int:
    worst = EXIT_OK
    for path in args.files:
        try:
            ws = _workspace(path)
        except _Exit as exc:
            print(exc.message, file=err)
            worst = max(worst, exc.code)
            continue
        bad = False
        for name, g in ws.graphs.items():
            for v in validate_graph(g, ws.signature):
                print(f"{path}: graph {name}: {v}", file=err)
                bad = True
        if bad:
            worst = max(worst, EXIT_INVALID)
        else:
            print(f"{path}: ok ({len(ws.graphs)} graph(s), {len(ws.rules)} rule(s))", file=out)
    return worst


def cmd_match(args, out: TextIO, err: TextIO) -> int:
    _, t, g, _ = _rule_and_graph(args)
    ms = find_matchings(t, g)
    if not ms:
        raise _Exit(EXIT_NO_MATCH, f"rule {t.name}: no matching in the graph")
    for i, m in enumerate(ms):
        print(f"{i}: {_fmt_map(m)}", file=out)
    return EXIT_OK


def cmd_apply(args, out: TextIO, err: TextIO) -> int:
    _, t, g, _ = _rule_and_graph(args)
    m = _pick(t, g, args.match)
    result = rewrite_step(t, m, g)
    fmt = "dot" if args.dot else "tg"
    text = render_graph(result.graph, fmt, name="H")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def cmd_normalize(args, out: TextIO, err: TextIO) -> int:
    ws = _workspace(args.rules)
    g = _graph(args.graph)
    _combined_signature(ws, g)
    trace = normalize(ws.rules, g, Strategy(args.max_steps), verify=args.verify)
    if args.trace:
        for i, step in enumerate(trace.steps, 1):
            print(f"# step {i}: {step.rule} at {_fmt_map(step.matching)}", file=out)
            out.write("# " + render_graph(step.result.graph, name=f"S{i}"))
    out.write(render_graph(trace.final, name="H"))
    steps = f"{len(trace)} step{'' if len(trace) == 1 else 's'}"
    if trace.truncated:
        print(f"truncated after {steps} (a redex remains)", file=err)
    else:
        print(f"normal form after {steps}", file=err)
    return EXIT_OK


def cmd_verify(args, out: TextIO, err: TextIO) -> int:
    _, t, g, sig = _rule_and_graph(args)
    m = _pick(t, g, args.match)
    result = build_result(t, m, g, check=False)
    failures = 0
    report = check_cone(t, m, g, Cone.of(result))
    print(f"cone check: {'ok' if not report else 'FAILED'}", file=out)
    for v in report:
        print(f"  {v}", file=out)
    failures += bool(report)

    cones = [Cone.of(result)] + harness_cones(t, m, g, result, count=20)
    bad = 0
    for c in cones:
        try:
            mediating_morphism(t, m, g, result, c)
        except (MediationError, ValidationError) as exc:
            bad += 1
            print(f"  mediating morphism failed: {exc}", file=out)
    print(f"mediating morphisms: {len(cones) - bad}/{len(cones)} ok", file=out)
    failures += bad

    if args.brute_budget is not None:
        try:
            rep = brute_force_initiality(t, m, g, result, args.brute_budget, sig)
        except BudgetError as exc:
            raise _Exit(EXIT_INVALID, f"{exc}; lower --brute-budget") from exc
        status = "ok" if rep.ok else "FAILED"
        print(f"brute-force initiality (budget {args.brute_budget}): {status}, "
              f"{rep.cones_checked} cones checked", file=out)
        for f in rep.failures[:10]:
            print(f"  {f}", file=out)
        failures += len(rep.failures)
    return EXIT_OK if not failures else EXIT_INTERNAL


def cmd_dot(args, out: TextIO, err: TextIO) -> int:
    g = _graph(args.graph)
    out.write(render_graph(g, "dot", name=Path(args.graph).stem))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="termgraph", description="Termgraph rewriting with cloning pushouts.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate graph and rule files")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_check)

    def rule_args(p, with_match=True):
        p.add_argument("--rules", required=True, help="rule file (.tgr)")
        p.add_argument("--rule", required=True, help="rule name")
        p.add_argument("--graph", required=True, help="graph file (.tg)")
        if with_match:
            p.add_argument("--match", type=int, default=0, help="matching index (default 0)")

    p = sub.add_parser("match", help="list the matchings of a rule")
    rule_args(p, with_match=False)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("apply", help="apply one rewrite step")
    rule_args(p)
    p.add_argument("--out", help="write the result to this file")
    p.add_argument("--dot", action="store_true", help="print the result as DOT")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("normalize", help="rewrite until no rule matches")
    p.add_argument("--rules", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--max-steps", type=int, default=1000)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--verify", action="store_true", help="re-check every step")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("verify", help="check the cone and initiality conditions of a step")
    rule_args(p)
    p.add_argument("--brute-budget", type=int, default=None,
                   help="also enumerate every cone with at most this many nodes")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dot", help="export a graph as Graphviz DOT")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_dot)
    return parser


def run(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    if getattr(args, "max_steps", 1) < 1:
        print("--max-steps must be at least 1", file=err)
        return EXIT_INVALID
    try:
        return args.func(args, out, err)
    except _Exit as exc:
        if exc.message:
            print(exc.message, file=err)
        return exc.code
    except ValidationError as exc:
        print(str(exc), file=err)
        return EXIT_INVALID
    except InvariantError as exc:
        print(f"internal invariant violated: {exc}", file=err)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())
