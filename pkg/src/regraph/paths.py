"""Active paths and the path form of the global Markov property.

A path between ``alpha`` and ``beta`` is active given ``c`` when each inner
collision node lies in ``c`` or its anterior set, and each inner transmitting
node lies outside ``c``.  The graph implies ``alpha _||_ beta | c`` exactly
when no active path exists.

Simple paths are enumerated depth first.  That is exponential in the worst
case, so this engine is meant for small graphs; :mod:`regraph.edge_matrix`
scales better.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .graph import Edge, RegressionGraph, VKind, anterior_indices, v_kind_at


@dataclass(frozen=True)
class Path:
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]
    # classification of each inner node, aligned with nodes[1:-1]
    inner_kinds: tuple[VKind, ...] = ()

    def __len__(self) -> int:
        return len(self.edges)

    def describe(self, graph: RegressionGraph) -> str:
        parts = [self.nodes[0]]
        for step, e in enumerate(self.edges):
            a, b = self.nodes[step], self.nodes[step + 1]
            xa = graph.index(a)
            mark = e.end_mark(xa)
            if e.kind.value == "dashed":
                sym = "--"
            elif e.kind.value == "full":
                sym = "=="
            else:
                sym = "<-" if mark == "head" else "->"
            parts.append(f" {sym} {b}")
        return "".join(parts)

    def to_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "inner": [{"node": n, "kind": k.value}
                      for n, k in zip(self.nodes[1:-1], self.inner_kinds)],
        }


class QueryError(ValueError):
    pass


def _query_sets(graph: RegressionGraph, alpha, beta, c):
    a, b, cc = graph.indices(alpha), graph.indices(beta), graph.indices(c or ())
    if not a or not b:
        raise QueryError("alpha and beta must be nonempty")
    if a & b or a & cc or b & cc:
        raise QueryError("alpha, beta and c must be disjoint")
    return a, b, cc


def path_from_nodes(graph: RegressionGraph, nodes: Iterable[str]) -> Path:
    """Build a :class:`Path` from consecutive node labels."""
    labels = tuple(str(x) for x in nodes)
    idx = [graph.index(x) for x in labels]
    if len(set(idx)) != len(idx):
        raise ValueError("path nodes must be distinct")
    edges = []
    for x, y in zip(idx, idx[1:]):
        e = graph.edge(x, y)
        if e is None:
            raise ValueError(f"{graph.labels[x]} and {graph.labels[y]} are not coupled")
        edges.append(e)
    kinds = tuple(v_kind_at(idx[p], edges[p - 1], edges[p]) for p in range(1, len(idx) - 1))
    return Path(labels, tuple(edges), kinds)


def is_active(graph: RegressionGraph, path: Path, c: Iterable[str] = ()) -> bool:
    cc = graph.indices(c)
    if graph.index(path.nodes[0]) in cc or graph.index(path.nodes[-1]) in cc:
        raise QueryError("path endpoints must not be in c")
    opened = cc | anterior_indices(graph, cc)
    for label, kind in zip(path.nodes[1:-1], path.inner_kinds):
        x = graph.index(label)
        if kind is VKind.COLLISION and x not in opened:
            return False
        if kind is VKind.TRANSMITTING and x in cc:
            return False
    return True


def _search(graph: RegressionGraph, a: frozenset[int], b: frozenset[int],
            cc: frozenset[int], include_edges: bool) -> Iterator[tuple[list[int], list[Edge]]]:
    opened = cc | anterior_indices(graph, cc)
    blocked = a | b  # inner nodes avoid both end sets

    def ok(inner: int, e_in: Edge, e_out: Edge) -> bool:
        if v_kind_at(inner, e_in, e_out) is VKind.COLLISION:
            return inner in opened
        return inner not in cc

    def extend(nodes: list[int], edges: list[Edge], on_path: set[int]):
        x = nodes[-1]
        for y, e in graph.neighbours(x):
            if y in on_path:
                continue
            if edges and not ok(x, edges[-1], e):
                continue
            if y in b:
                if edges or include_edges:
                    yield nodes + [y], edges + [e]
                continue
            if y in blocked:
                continue
            on_path.add(y)
            yield from extend(nodes + [y], edges + [e], on_path)
            on_path.discard(y)

    for start in sorted(a):
        yield from extend([start], [], {start})


def find_active_paths(graph: RegressionGraph, alpha: Iterable[str], beta: Iterable[str],
                      c: Iterable[str] = (), *, include_edges: bool = False) -> list[Path]:
    """All simple active paths between ``alpha`` and ``beta`` given ``c``.

    Single edges are always active; they are only listed with
    ``include_edges=True``, so the default result holds the paths that
    induce a dependence beyond a direct edge.
    """
    a, b, cc = _query_sets(graph, alpha, beta, c)
    out = []
    for nodes, edges in _search(graph, a, b, cc, include_edges):
        kinds = tuple(v_kind_at(nodes[p], edges[p - 1], edges[p])
                      for p in range(1, len(nodes) - 1))
        out.append(Path(tuple(graph.labels[x] for x in nodes), tuple(edges), kinds))
    out.sort(key=lambda p: (len(p), p.nodes))
    return out


def implies_independence_idx(graph: RegressionGraph, a: frozenset[int], b: frozenset[int],
                             cc: frozenset[int]) -> bool:
    """Index version of :func:`implies_independence`, no argument checks."""
    for x in a:
        for y in b:
            if graph.adjacent(x, y):
                return False
    for _ in _search(graph, a, b, cc, include_edges=False):
        return False
    return True


def implies_independence(graph: RegressionGraph, alpha: Iterable[str], beta: Iterable[str],
                         c: Iterable[str] = ()) -> bool:
    a, b, cc = _query_sets(graph, alpha, beta, c)
    return implies_independence_idx(graph, a, b, cc)


def independence_table(graph: RegressionGraph) -> dict[tuple[int, int, frozenset[int]], bool]:
    """Verdict for every ordered pair ``(i, k)`` and every ``c`` avoiding both."""
    out = {}
    n = len(graph)
    for i in range(n):
        for k in range(n):
            if i == k:
                continue
            rest = [x for x in range(n) if x not in (i, k)]
            for mask in range(1 << len(rest)):
                cc = frozenset(rest[p] for p in range(len(rest)) if mask >> p & 1)
                if k < i:
                    out[(i, k, cc)] = out[(k, i, cc)]
                else:
                    out[(i, k, cc)] = implies_independence_idx(
                        graph, frozenset((i,)), frozenset((k,)), cc)
    return out
