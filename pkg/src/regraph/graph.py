"""Regression graphs: ordered components, three edge types, validation and I/O.

A regression graph splits its nodes into ordered connected components
``g_1, ..., g_J``.  Response components come first, context components last.
Edges are

* ``arrow i k``  -- ``i <- k``: ``i`` is a response node, ``k`` lies in a
  strictly later component,
* ``dashed i k`` -- ``i -- k`` inside one response component,
* ``full i k``   -- ``i == k`` inside one context component.

Labels are arbitrary tokens.  Internally every node gets a dense index in
component order, so index order is the generating order ``g_1`` first.
"""
from __future__ import annotations

import enum
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class EdgeKind(enum.Enum):
    ARROW = "arrow"
    DASHED = "dashed"
    FULL = "full"


class ComponentKind(enum.Enum):
    RESPONSE = "response"
    CONTEXT = "context"


class VKind(enum.Enum):
    COLLISION = "collision"
    TRANSMITTING = "transmitting"


@dataclass(frozen=True)
class ValidationIssue:
    message: str
    line: int | None = None

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f"line {self.line}: {self.message}"


class GraphValidationError(ValueError):
    """Raised with every problem found while building or parsing a graph."""

    def __init__(self, issues: Sequence[ValidationIssue]):
        self.issues = list(issues)
        super().__init__("; ".join(str(x) for x in self.issues))


@dataclass(frozen=True)
class Edge:
    """Edge between node indices.

    For arrows ``i`` is the response (arrowhead) and ``k`` the regressor.
    Undirected edges are stored with ``i < k``.
    """

    i: int
    k: int
    kind: EdgeKind

    def sort_key(self) -> tuple[int, int, str]:
        return (self.i, self.k, self.kind.value)

    def pair(self) -> frozenset[int]:
        return frozenset((self.i, self.k))

    def other(self, node: int) -> int:
        return self.k if node == self.i else self.i

    def end_mark(self, node: int) -> str:
        """Mark of the edge at ``node``: 'head', 'tail', 'dashed' or 'full'."""
        if self.kind is EdgeKind.ARROW:
            return "head" if node == self.i else "tail"
        return self.kind.value


@dataclass(frozen=True)
class Component:
    kind: ComponentKind
    nodes: tuple[int, ...]


@dataclass(frozen=True)
class VConfig:
    endpoints: frozenset[str]
    inner: str
    kind: VKind


_LABEL_RE = re.compile(r"^[A-Za-z0-9_.]+$")


class RegressionGraph:
    """Immutable, validated regression graph.

    Build one with :meth:`build` (labels) or :func:`parse_graph` (text).
    """

    __slots__ = (
        "labels", "components", "edges", "_index", "_comp_of", "_adj",
        "_parents", "_children", "_dashed", "_full",
    )

    def __init__(self, labels: Sequence[str], components: Sequence[Component],
                 edges: Iterable[Edge]):
        # trusted constructor; use build()/parse_graph() for validation
        self.labels: tuple[str, ...] = tuple(labels)
        self.components: tuple[Component, ...] = tuple(components)
        self.edges: frozenset[Edge] = frozenset(edges)
        self._index = {lab: n for n, lab in enumerate(self.labels)}
        comp_of = [0] * len(self.labels)
        for j, comp in enumerate(self.components):
            for node in comp.nodes:
                comp_of[node] = j
        self._comp_of = tuple(comp_of)
        n = len(self.labels)
        adj: dict[int, dict[int, Edge]] = {x: {} for x in range(n)}
        parents = [set() for _ in range(n)]
        children = [set() for _ in range(n)]
        dashed = [set() for _ in range(n)]
        full = [set() for _ in range(n)]
        for e in self.edges:
            adj[e.i][e.k] = e
            adj[e.k][e.i] = e
            if e.kind is EdgeKind.ARROW:
                parents[e.i].add(e.k)
                children[e.k].add(e.i)
            elif e.kind is EdgeKind.DASHED:
                dashed[e.i].add(e.k)
                dashed[e.k].add(e.i)
            else:
                full[e.i].add(e.k)
                full[e.k].add(e.i)
        self._adj = adj
        self._parents = tuple(frozenset(s) for s in parents)
        self._children = tuple(frozenset(s) for s in children)
        self._dashed = tuple(frozenset(s) for s in dashed)
        self._full = tuple(frozenset(s) for s in full)

    # -- construction -------------------------------------------------------

    @classmethod
    def build(cls, components: Sequence[tuple[str, Sequence[str]]],
              arrows: Iterable[tuple[str, str]] = (),
              dashed: Iterable[tuple[str, str]] = (),
              full: Iterable[tuple[str, str]] = ()) -> "RegressionGraph":
        """Build and validate a graph from labels.

        ``components`` is the ordered list ``[(kind, labels), ...]`` with
        ``kind`` in {"response", "context"}; ``arrows`` holds pairs
        ``(i, k)`` meaning ``i <- k``.
        """
        comps = [(str(kind), [str(x) for x in nodes], None)
                 for kind, nodes in components]
        typed = [("arrow", str(i), str(k), None) for i, k in arrows]
        typed += [("dashed", str(i), str(k), None) for i, k in dashed]
        typed += [("full", str(i), str(k), None) for i, k in full]
        return _assemble(comps, typed)

    # -- basic accessors ----------------------------------------------------

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RegressionGraph):
            return NotImplemented
        return (self.labels == other.labels and self.components == other.components
                and self.edges == other.edges)

    def __hash__(self) -> int:
        return hash((self.labels, self.components, self.edges))

    def __repr__(self) -> str:
        return f"RegressionGraph({serialize_graph(self)!r})"

    def index(self, label: str) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise KeyError(f"unknown node {label!r}") from None

    def indices(self, labels: Iterable[str]) -> frozenset[int]:
        return frozenset(self.index(x) for x in labels)

    def label_set(self, nodes: Iterable[int]) -> frozenset[str]:
        return frozenset(self.labels[x] for x in nodes)

    @property
    def nodes(self) -> range:
        return range(len(self.labels))

    def component_of(self, node: int) -> int:
        return self._comp_of[node]

    def is_context(self, node: int) -> bool:
        return self.components[self._comp_of[node]].kind is ComponentKind.CONTEXT

    @property
    def response_nodes(self) -> tuple[int, ...]:
        return tuple(x for x in self.nodes if not self.is_context(x))

    @property
    def context_nodes(self) -> tuple[int, ...]:
        return tuple(x for x in self.nodes if self.is_context(x))

    def edge(self, x: int, y: int) -> Edge | None:
        return self._adj[x].get(y)

    def adjacent(self, x: int, y: int) -> bool:
        return y in self._adj[x]

    def neighbours(self, x: int) -> Iterator[tuple[int, Edge]]:
        return iter(self._adj[x].items())

    def parents(self, x: int) -> frozenset[int]:
        return self._parents[x]

    def children(self, x: int) -> frozenset[int]:
        return self._children[x]

    def dashed_neighbours(self, x: int) -> frozenset[int]:
        return self._dashed[x]

    def full_neighbours(self, x: int) -> frozenset[int]:
        return self._full[x]

    def edges_of(self, kind: EdgeKind) -> list[Edge]:
        return sorted((e for e in self.edges if e.kind is kind), key=Edge.sort_key)


# -- assembly & validation ----------------------------------------------------

def _assemble(comps: list[tuple[str, list[str], int | None]],
              typed: list[tuple[str, str, str, int | None]]) -> RegressionGraph:
    issues: list[ValidationIssue] = []
    labels: list[str] = []
    comp_of: dict[str, int] = {}
    components: list[Component] = []
    seen_context = False
    for j, (kind_name, members, line) in enumerate(comps):
        try:
            kind = ComponentKind(kind_name)
        except ValueError:
            issues.append(ValidationIssue(f"unknown component kind {kind_name!r}", line))
            kind = ComponentKind.RESPONSE
        if kind is ComponentKind.CONTEXT:
            seen_context = True
        elif seen_context:
            issues.append(ValidationIssue(
                f"response component {j + 1} follows a context component", line))
        if not members:
            issues.append(ValidationIssue(f"component {j + 1} is empty", line))
        idx = []
        for lab in members:
            if not _LABEL_RE.match(lab):
                issues.append(ValidationIssue(f"invalid node label {lab!r}", line))
            if lab in comp_of:
                issues.append(ValidationIssue(f"duplicate node {lab!r}", line))
                continue
            comp_of[lab] = j
            idx.append(len(labels))
            labels.append(lab)
        components.append(Component(kind, tuple(idx)))

    index = {lab: n for n, lab in enumerate(labels)}
    edges: dict[frozenset[int], Edge] = {}
    for kind_name, a, b, line in typed:
        bad = [x for x in (a, b) if x not in index]
        if bad:
            for x in bad:
                issues.append(ValidationIssue(f"unknown node {x!r}", line))
            continue
        if a == b:
            issues.append(ValidationIssue(f"self-loop at {a!r}", line))
            continue
        i, k = index[a], index[b]
        ci, ck = comp_of[a], comp_of[b]
        if kind_name == "arrow":
            if components[ci].kind is ComponentKind.CONTEXT:
                issues.append(ValidationIssue(
                    f"arrow {a} <- {b} points into context node {a!r}", line))
                continue
            if ck == ci:
                issues.append(ValidationIssue(
                    f"arrow {a} <- {b} joins nodes of the same component", line))
                continue
            if ck < ci:
                issues.append(ValidationIssue(
                    f"arrow {a} <- {b} points into the past", line))
                continue
            edge = Edge(i, k, EdgeKind.ARROW)
        elif kind_name in ("dashed", "full"):
            kind = EdgeKind(kind_name)
            if ci != ck:
                issues.append(ValidationIssue(
                    f"{kind_name} edge {a} {b} joins different components", line))
                continue
            want = ComponentKind.RESPONSE if kind is EdgeKind.DASHED else ComponentKind.CONTEXT
            if components[ci].kind is not want:
                issues.append(ValidationIssue(
                    f"{kind_name} edge {a} {b} inside a {components[ci].kind.value} component",
                    line))
                continue
            edge = Edge(min(i, k), max(i, k), kind)
        else:
            issues.append(ValidationIssue(f"unknown edge kind {kind_name!r}", line))
            continue
        key = frozenset((i, k))
        if key in edges:
            issues.append(ValidationIssue(f"duplicate edge for pair {a} {b}", line))
            continue
        edges[key] = edge

    if not issues:
        graph = RegressionGraph(labels, components, edges.values())
        for j, (comp, computed) in enumerate(zip(graph.components,
                                                 _split_by_undirected(graph))):
            if computed != [frozenset(comp.nodes)]:
                parts = " | ".join(" ".join(sorted(graph.label_set(p))) for p in computed)
                issues.append(ValidationIssue(
                    f"component {j + 1} is not connected by its undirected edges ({parts})",
                    comps[j][2]))
        if not issues:
            return graph
    raise GraphValidationError(issues)


def _split_by_undirected(graph: RegressionGraph) -> list[list[frozenset[int]]]:
    """Connected pieces of each declared component under undirected edges."""
    out = []
    for comp in graph.components:
        remaining = set(comp.nodes)
        pieces = []
        for start in comp.nodes:
            if start not in remaining:
                continue
            piece = _undirected_reach(graph, start)
            remaining -= piece
            pieces.append(frozenset(piece))
        out.append(pieces)
    return out


def _undirected_reach(graph: RegressionGraph, start: int) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in graph.dashed_neighbours(x) | graph.full_neighbours(x):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


# -- text format ----------------------------------------------------------------

_COMPONENT_RE = re.compile(r"^component\s+(\S+)\s+(\S+?)\s*:\s*(.*)$")


def parse_graph(text: str) -> RegressionGraph:
    """Parse the line-based graph format.

    Raises :class:`GraphValidationError` listing every problem with its line.
    """
    issues: list[ValidationIssue] = []
    comps: list[tuple[str, list[str], int | None]] = []
    typed: list[tuple[str, str, str, int | None]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _COMPONENT_RE.match(line)
        if m:
            number, kind, rest = m.groups()
            if not number.isdigit() or int(number) != len(comps) + 1:
                issues.append(ValidationIssue(
                    f"component number {number} out of sequence (expected {len(comps) + 1})",
                    lineno))
            comps.append((kind, rest.split(), lineno))
            continue
        parts = line.split()
        if parts[0] in ("arrow", "dashed", "full"):
            if len(parts) != 3:
                issues.append(ValidationIssue(f"{parts[0]} needs exactly two nodes", lineno))
                continue
            typed.append((parts[0], parts[1], parts[2], lineno))
            continue
        issues.append(ValidationIssue(f"cannot parse {line!r}", lineno))
    if not comps:
        issues.append(ValidationIssue("no components declared"))
    if issues:
        raise GraphValidationError(issues)
    return _assemble(comps, typed)


def serialize_graph(graph: RegressionGraph) -> str:
    """Deterministic text form; :func:`parse_graph` inverts it."""
    lines = []
    for j, comp in enumerate(graph.components, start=1):
        members = " ".join(graph.labels[x] for x in comp.nodes)
        lines.append(f"component {j} {comp.kind.value}: {members}")
    edge_lines = sorted(
        (e.kind.value, graph.labels[e.i], graph.labels[e.k]) for e in graph.edges)
    lines.extend(" ".join(t) for t in edge_lines)
    return "\n".join(lines) + "\n"


# -- structural queries -----------------------------------------------------------

def connected_components(graph: RegressionGraph) -> list[frozenset[str]]:
    """Connected components after deleting all arrows, in declared order."""
    out = []
    seen: set[int] = set()
    for comp in graph.components:
        for start in comp.nodes:
            if start in seen:
                continue
            piece = _undirected_reach(graph, start)
            seen |= piece
            out.append(graph.label_set(piece))
    return out


def anterior_indices(graph: RegressionGraph, c: Iterable[int]) -> frozenset[int]:
    """Index version of :func:`anterior_set`."""
    c = frozenset(c)
    seen = set(c)
    queue = deque(c)
    while queue:
        x = queue.popleft()
        for y in graph.parents(x) | graph.full_neighbours(x):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen - c)


def anterior_set(graph: RegressionGraph, c: Iterable[str]) -> frozenset[str]:
    """Nodes outside ``c`` with an anterior path into some node of ``c``.

    Breadth-first search over reversed arrows and full lines.
    """
    return graph.label_set(anterior_indices(graph, graph.indices(c)))


def v_kind_at(inner: int, e1: Edge, e2: Edge) -> VKind:
    """Collision iff both edges end at ``inner`` with an arrowhead or a dash."""
    if all(e.end_mark(inner) in ("head", "dashed") for e in (e1, e2)):
        return VKind.COLLISION
    return VKind.TRANSMITTING


def classify_v(graph: RegressionGraph, i: str, o: str, k: str) -> VConfig:
    xi, xo, xk = graph.index(i), graph.index(o), graph.index(k)
    if len({xi, xo, xk}) != 3:
        raise ValueError("a V needs three distinct nodes")
    e1, e2 = graph.edge(xi, xo), graph.edge(xo, xk)
    if e1 is None or e2 is None or graph.adjacent(xi, xk):
        raise ValueError(f"({i}, {o}, {k}) does not induce a V")
    return VConfig(frozenset((i, k)), o, v_kind_at(xo, e1, e2))


def iter_vs(graph: RegressionGraph) -> Iterator[tuple[int, int, int, VKind]]:
    """All Vs as ``(i, o, k, kind)`` with ``i < k``."""
    for o in graph.nodes:
        nbrs = sorted(graph._adj[o].items())
        for p, (i, ei) in enumerate(nbrs):
            for k, ek in nbrs[p + 1:]:
                if not graph.adjacent(i, k):
                    yield i, o, k, v_kind_at(o, ei, ek)


def skeleton(graph: RegressionGraph) -> frozenset[frozenset[str]]:
    return frozenset(graph.label_set(e.pair()) for e in graph.edges)
