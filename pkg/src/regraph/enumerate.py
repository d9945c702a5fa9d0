"""Exhaustive and random generation of small regression graphs."""
from __future__ import annotations

import itertools
from typing import Iterator, Sequence

import numpy as np

from .graph import Component, ComponentKind, Edge, EdgeKind, RegressionGraph


def _ordered_partitions(items: Sequence[int]) -> Iterator[list[tuple[int, ...]]]:
    if not items:
        yield []
        return
    n = len(items)
    for labels in itertools.product(range(n), repeat=n):
        used = sorted(set(labels))
        if used != list(range(len(used))):
            continue
        yield [tuple(x for x, l in zip(items, labels) if l == j) for j in used]


def _connected(nodes: tuple[int, ...], pairs: Sequence[tuple[int, int]]) -> bool:
    if len(nodes) <= 1:
        return True
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        x = stack.pop()
        for p, q in pairs:
            for s, t in ((p, q), (q, p)):
                if s == x and t not in seen:
                    seen.add(t)
                    stack.append(t)
    return len(seen) == len(nodes)


def _connected_edge_sets(nodes: tuple[int, ...]) -> list[list[tuple[int, int]]]:
    pairs = list(itertools.combinations(nodes, 2))
    out = []
    for mask in range(1 << len(pairs)):
        chosen = [pairs[p] for p in range(len(pairs)) if mask >> p & 1]
        if _connected(nodes, chosen):
            out.append(chosen)
    return out


def _make(n: int, blocks: list[tuple[int, ...]], n_response: int,
          undirected: list[list[tuple[int, int]]], arrows: list[tuple[int, int]]
          ) -> RegressionGraph:
    # relabel so indices follow component order
    order = [x for blk in blocks for x in blk]
    new = {x: p for p, x in enumerate(order)}
    labels = [str(x + 1) for x in order]
    comps = []
    edges = []
    for j, blk in enumerate(blocks):
        kind = ComponentKind.RESPONSE if j < n_response else ComponentKind.CONTEXT
        comps.append(Component(kind, tuple(new[x] for x in blk)))
        ek = EdgeKind.DASHED if kind is ComponentKind.RESPONSE else EdgeKind.FULL
        for p, q in undirected[j]:
            i, k = sorted((new[p], new[q]))
            edges.append(Edge(i, k, ek))
    for i, k in arrows:
        edges.append(Edge(new[i], new[k], EdgeKind.ARROW))
    return RegressionGraph(labels, comps, edges)


def graph_key(graph: RegressionGraph) -> tuple:
    """Identity up to the order of components that no arrow constrains."""
    lab = graph.labels
    edges = frozenset((e.kind.value, lab[e.i], lab[e.k]) if e.kind is EdgeKind.ARROW
                      else (e.kind.value, frozenset((lab[e.i], lab[e.k])))
                      for e in graph.edges)
    ctx = frozenset(lab[x] for x in graph.context_nodes)
    return (frozenset(lab), edges, ctx)


def all_graphs(n: int) -> list[RegressionGraph]:
    """Every regression graph on nodes ``1..n``, one per distinct structure."""
    nodes = tuple(range(n))
    seen = {}
    conn_cache: dict[tuple[int, ...], list] = {}
    for blocks in _ordered_partitions(nodes):
        undirected_choices = []
        for blk in blocks:
            if blk not in conn_cache:
                conn_cache[blk] = _connected_edge_sets(blk)
            undirected_choices.append(conn_cache[blk])
        for n_response in range(len(blocks) + 1):
            cross = [(i, k) for j in range(n_response) for i in blocks[j]
                     for jj in range(j + 1, len(blocks)) for k in blocks[jj]]
            for und in itertools.product(*undirected_choices):
                for mask in range(1 << len(cross)):
                    arrows = [cross[p] for p in range(len(cross)) if mask >> p & 1]
                    g = _make(n, blocks, n_response, list(und), arrows)
                    key = graph_key(g)
                    if key not in seen:
                        seen[key] = g
    return list(seen.values())


def all_graphs_up_to(n: int) -> list[RegressionGraph]:
    out = []
    for m in range(1, n + 1):
        out.extend(all_graphs(m))
    return out


def random_graph(n: int, rng: np.random.Generator, p_edge: float = 0.5) -> RegressionGraph:
    """Random regression graph on ``n`` nodes.

    Component sizes, the response/context split, the undirected edges inside
    each component (a random spanning tree plus extra edges) and the arrows
    are all drawn from ``rng``.
    """
    perm = [int(x) for x in rng.permutation(n)]
    blocks = []
    start = 0
    while start < n:
        size = int(rng.integers(1, min(3, n - start) + 1))
        blocks.append(tuple(perm[start:start + size]))
        start += size
    n_response = int(rng.integers(0, len(blocks) + 1))
    undirected = []
    for blk in blocks:
        chosen = set()
        for p in range(1, len(blk)):
            q = int(rng.integers(0, p))
            chosen.add(tuple(sorted((blk[p], blk[q]))))
        for pair in itertools.combinations(sorted(blk), 2):
            if pair not in chosen and rng.random() < p_edge:
                chosen.add(pair)
        undirected.append(sorted(chosen))
    cross = [(i, k) for j in range(n_response) for i in blocks[j]
             for jj in range(j + 1, len(blocks)) for k in blocks[jj]]
    arrows = [pair for pair in cross if rng.random() < p_edge]
    return _make(n, blocks, n_response, undirected, arrows)
