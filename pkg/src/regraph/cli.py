"""``regraph`` command line.

Exit codes: 0 success, 1 negative finding (not equivalent, oracle
violations, engine disagreement), 2 usage error, 3 invalid graph file.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import discrete, edge_matrix, equivalence, gaussian, paths
from .graph import EdgeKind, GraphValidationError, RegressionGraph, parse_graph, serialize_graph

EXIT_OK, EXIT_FINDING, EXIT_USAGE, EXIT_INVALID = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _labels(values: Sequence[str] | None) -> list[str]:
    out: list[str] = []
    for v in values or ():
        out.extend(x for x in v.replace(",", " ").split() if x)
    return out


def _load(path: str) -> RegressionGraph:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_graph(text)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _sets(args, graph):
    a, b, c = _labels(args.a), _labels(args.b), _labels(args.c)
    for lab in a + b + c:
        if lab not in graph.labels:
            raise UsageError(f"unknown node {lab!r}")
    return a, b, c


# -- subcommands ---------------------------------------------------------------

def cmd_validate(args) -> int:
    g = _load(args.file)
    comps = [{"kind": comp.kind.value, "nodes": [g.labels[x] for x in comp.nodes]}
             for comp in g.components]
    counts = {k.value: len(g.edges_of(k)) for k in EdgeKind}
    text = (f"valid: {len(g)} nodes, {len(comps)} components, "
            + ", ".join(f"{n} {k}" for k, n in counts.items()))
    _emit(args, {"valid": True, "nodes": list(g.labels), "components": comps,
                 "edges": counts}, text)
    return EXIT_OK


def cmd_query(args) -> int:
    g = _load(args.file)
    a, b, c = _sets(args, g)
    verdicts = {}
    if args.engine in ("paths", "both"):
        found = paths.find_active_paths(g, a, b, c, include_edges=True)
        verdicts["paths"] = (not found, [p.describe(g) for p in found])
    if args.engine in ("matrix", "both"):
        v = edge_matrix.implies(g, a, b, c)
        verdicts["matrix"] = (v.independent, [f"{x} <- {y}" for x, y in v.witnesses])
    labels = {k: "Independent" if ind else "Dependent" for k, (ind, _) in verdicts.items()}
    agree = len(set(labels.values())) == 1
    lines = []
    if agree:
        lines.append(next(iter(labels.values())))
    else:
        lines.append("DISAGREEMENT " + " ".join(f"{k}={v}" for k, v in labels.items()))
    for k, (_, wit) in verdicts.items():
        for w in wit:
            lines.append(f"  {k}: {w}")
    payload = {"a": a, "b": b, "c": c, "agree": agree,
               "verdicts": {k: {"verdict": labels[k], "witnesses": wit}
                            for k, (_, wit) in verdicts.items()}}
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if agree else EXIT_FINDING


def cmd_paths(args) -> int:
    g = _load(args.file)
    a, b, c = _sets(args, g)
    found = paths.find_active_paths(g, a, b, c, include_edges=args.include_edges)
    text = "\n".join(p.describe(g) for p in found) if found else "no active paths"
    _emit(args, {"paths": [p.to_dict() for p in found]}, text)
    return EXIT_OK


def cmd_transform(args) -> int:
    g = _load(args.file)
    a, b, c = _sets(args, g)
    induced = edge_matrix.induced_subgraph_query(g, a, b, c)
    _emit(args, {"graph": serialize_graph(induced)}, serialize_graph(induced).rstrip("\n"))
    return EXIT_OK


def cmd_equiv(args) -> int:
    g1, g2 = _load(args.first), _load(args.second)
    try:
        rep = equivalence.compare(g1, g2)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    def fmt(vs):
        return sorted(f"{'-'.join(sorted(pair))} at {o}" for pair, o in vs)

    def fmt_edges(es):
        return sorted("-".join(sorted(e)) for e in es)

    lines = ["equivalent" if rep.equivalent else "not equivalent"]
    if not rep.same_skeleton:
        lines.append("skeleton only in first: " + ", ".join(fmt_edges(rep.skeleton_diff[0])))
        lines.append("skeleton only in second: " + ", ".join(fmt_edges(rep.skeleton_diff[1])))
    for name, vs in (("first", rep.only_first), ("second", rep.only_second)):
        if vs:
            lines.append(f"collision Vs only in {name}: " + "; ".join(fmt(vs)))
    payload = {"equivalent": rep.equivalent, "same_skeleton": rep.same_skeleton,
               "only_first": fmt(rep.only_first), "only_second": fmt(rep.only_second),
               "skeleton_only_first": fmt_edges(rep.skeleton_diff[0]),
               "skeleton_only_second": fmt_edges(rep.skeleton_diff[1])}
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if rep.equivalent else EXIT_FINDING


def cmd_oracle(args) -> int:
    g = _load(args.file)
    if args.draws < 2:
        raise UsageError("--draws must be at least 2")
    rep = gaussian.oracle_check(g, draws=args.draws, tol=args.tol, seed=args.seed)
    _emit(args, rep.to_dict(), rep.to_text())
    return EXIT_OK if rep.ok else EXIT_FINDING


def cmd_tables(args) -> int:
    try:
        table = discrete.family_table(args.family, args.alpha, args.beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    prop = discrete.FAMILY_PROPERTY[args.family]
    cx = discrete.check_property(table, prop)
    facts = discrete.family_facts(table, args.family)
    lines = [discrete.format_table(table).rstrip("\n"),
             f"{prop.value}: " + (str(cx) if cx else "holds")]
    for stmt, want, got in facts:
        lines.append(f"{stmt}: {'confirmed' if want == got else 'NOT confirmed'}")
    payload = {"family": args.family, "alpha": args.alpha, "beta": args.beta,
               "names": list(table.names), "levels": list(table.levels),
               "probs": table.probs.ravel().tolist(), "property": prop.value,
               "violated": cx is not None,
               "counterexample": {k: list(v) for k, v in cx.roles} if cx else None,
               "facts": [{"statement": s, "confirmed": w == g_} for s, w, g_ in facts]}
    if args.family == 1:
        gap = discrete.darroch_gap(table)
        lines.append(f"Darroch identity gap: {gap:.3e}")
        payload["darroch_gap"] = gap
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def to_dot(graph: RegressionGraph) -> str:
    """DOT drawing: solid arrows, dashed lines, solid undirected full lines."""
    lab = graph.labels
    out = ["digraph regression {", "  rankdir=RL;"]
    for j, comp in enumerate(graph.components, start=1):
        out.append(f"  subgraph cluster_{j} {{")
        out.append(f'    label="{j} {comp.kind.value}";')
        if comp.kind.value == "context":
            out.append("    style=rounded;")
        for x in comp.nodes:
            out.append(f'    "{lab[x]}";')
        out.append("  }")
    for e in sorted(graph.edges, key=lambda e: e.sort_key()):
        if e.kind is EdgeKind.ARROW:
            out.append(f'  "{lab[e.k]}" -> "{lab[e.i]}";')
        elif e.kind is EdgeKind.DASHED:
            out.append(f'  "{lab[e.i]}" -> "{lab[e.k]}" [dir=none, style=dashed];')
        else:
            out.append(f'  "{lab[e.i]}" -> "{lab[e.k]}" [dir=none, style=solid];')
    out.append("}")
    return "\n".join(out)


def cmd_dot(args) -> int:
    g = _load(args.file)
    text = to_dot(g)
    _emit(args, {"dot": text}, text)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured JSON output")

    parser = _Parser(prog="regraph", parents=[common],
                     description="Regression graph queries and oracles.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def sets(p, names=("--a", "--b")):
        p.add_argument(names[0], "--alpha", dest="a", nargs="+", required=True, metavar="LABEL")
        p.add_argument(names[1], "--beta", dest="b", nargs="+", required=True, metavar="LABEL")
        p.add_argument("--c", nargs="*", default=[], metavar="LABEL")

    p = sub.add_parser("validate", parents=[common], help="check a graph file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("query", parents=[common], help="implied independence of a and b given c")
    p.add_argument("file")
    sets(p)
    p.add_argument("--engine", choices=("paths", "matrix", "both"), default="both")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("paths", parents=[common], help="list active paths")
    p.add_argument("file")
    sets(p)
    p.add_argument("--include-edges", action="store_true",
                   help="also list single edges joining a and b")
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("transform", parents=[common],
                       help="induced graph for a given b and c, marginalising the rest")
    p.add_argument("file")
    sets(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("equiv", parents=[common], help="Markov equivalence of two graphs")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("oracle", parents=[common], help="check a graph against Gaussian draws")
    p.add_argument("file")
    p.add_argument("--draws", type=int, default=10)
    p.add_argument("--tol", type=float, default=gaussian.DEFAULT_TOL)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("tables", parents=[common], help="discrete counterexample families")
    p.add_argument("--family", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("dot", parents=[common], help="Graphviz DOT export")
    p.add_argument("file")
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except paths.QueryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GraphValidationError as exc:
        for issue in exc.issues:
            print(f"invalid: {issue}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
