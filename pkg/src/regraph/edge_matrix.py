"""Binary edge-matrix calculus for regression graphs.

Edge matrices carry ones on the diagonal, so sums of products of them close
paths.  Products are taken over nonnegative integers and mapped back to 0/1
with :func:`indicator`.

Main entry points:

* :func:`edge_matrices` -- ``H`` (arrows and full lines, N x N) and ``W``
  (dashed lines, u x u),
* :func:`zer` -- partial closure over a node set,
* :func:`induced_matrices` -- edge matrices of the graph induced for
  ``f(a|b) f(b)`` with ``a = alpha + m`` and ``b = beta + c``,
* :func:`implies` -- the edge criterion on the ``alpha x beta`` block.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graph import EdgeKind, RegressionGraph
from .paths import QueryError


@dataclass(frozen=True)
class BinaryMatrix:
    """0/1 matrix with node labels on rows and columns."""

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    data: np.ndarray = field(compare=False)

    def __post_init__(self):
        if self.data.shape != (len(self.rows), len(self.cols)):
            raise ValueError("shape does not match labels")

    def __eq__(self, other):
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return (self.rows == other.rows and self.cols == other.cols
                and np.array_equal(self.data, other.data))

    def __getitem__(self, key: tuple[str, str]) -> int:
        r, c = key
        return int(self.data[self.rows.index(str(r)), self.cols.index(str(c))])

    def sub(self, rows: Iterable[str], cols: Iterable[str]) -> "BinaryMatrix":
        rows, cols = tuple(map(str, rows)), tuple(map(str, cols))
        ri = [self.rows.index(x) for x in rows]
        ci = [self.cols.index(x) for x in cols]
        return BinaryMatrix(rows, cols, self.data[np.ix_(ri, ci)])

    def ones(self, off_diagonal: bool = True) -> list[tuple[str, str]]:
        out = []
        for p, r in enumerate(self.rows):
            for q, c in enumerate(self.cols):
                if self.data[p, q] and not (off_diagonal and r == c):
                    out.append((r, c))
        return out

    def to_text(self) -> str:
        width = max([len(x) for x in self.rows + self.cols] + [1])
        head = " " * width + " " + " ".join(c.rjust(width) for c in self.cols)
        lines = [head]
        for p, r in enumerate(self.rows):
            cells = " ".join(str(int(v)).rjust(width) for v in self.data[p])
            lines.append(r.rjust(width) + " " + cells)
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {"rows": list(self.rows), "cols": list(self.cols),
                "data": self.data.astype(int).tolist()}


@dataclass(frozen=True)
class EdgeMatrixPair:
    H: BinaryMatrix
    Wuu: BinaryMatrix


@dataclass(frozen=True)
class InducedTriple:
    P: BinaryMatrix   # a x b, arrows from b to a
    Saa: BinaryMatrix  # a x a, dashed lines
    Sbb: BinaryMatrix  # b x b, full lines


@dataclass(frozen=True)
class QueryVerdict:
    independent: bool
    engine: str
    # a Dependent verdict presumes the graph is a dependence base
    assumes_dependence_base: bool
    witnesses: tuple = ()

    @property
    def label(self) -> str:
        return "Independent" if self.independent else "Dependent"


# -- primitives ---------------------------------------------------------------

def indicator(m) -> np.ndarray:
    """Entry-wise ``1`` where positive, ``0`` where zero."""
    m = np.asarray(m)
    if (m < 0).any():
        raise ValueError("indicator needs a nonnegative matrix")
    return (m > 0).astype(np.uint8)


def _mul(*ms: np.ndarray) -> np.ndarray:
    out = ms[0].astype(np.int64)
    for m in ms[1:]:
        out = indicator(out @ m.astype(np.int64))
    return indicator(out)


def zer(F, a: Iterable[int]) -> np.ndarray:
    """Partial closure of a square unit-diagonal binary matrix over positions ``a``.

    Each node ``i`` of ``a`` in turn adds ``F[b, i] F[i, b]`` to ``F[b, b]``.
    With a unit diagonal at ``i`` that equals updating the whole matrix.
    """
    F = indicator(F).copy()
    n = F.shape[0]
    if F.shape != (n, n):
        raise ValueError("zer needs a square matrix")
    for i in a:
        if not F[i, i]:
            raise ValueError(f"diagonal entry {i} is zero")
        F |= np.outer(F[:, i], F[i, :]).astype(np.uint8)
    return F


def closure(F) -> np.ndarray:
    """Partial closure over every position."""
    return zer(F, range(np.asarray(F).shape[0]))


# -- graph edge matrices --------------------------------------------------------

def edge_arrays(graph: RegressionGraph) -> tuple[np.ndarray, np.ndarray]:
    """``H`` over all nodes and ``W`` over all nodes (zero outside u x u), index order."""
    n = len(graph)
    H = np.eye(n, dtype=np.uint8)
    W = np.zeros((n, n), dtype=np.uint8)
    for x in graph.response_nodes:
        W[x, x] = 1
    for e in graph.edges:
        if e.kind is EdgeKind.ARROW:
            H[e.i, e.k] = 1
        elif e.kind is EdgeKind.FULL:
            H[e.i, e.k] = H[e.k, e.i] = 1
        else:
            W[e.i, e.k] = W[e.k, e.i] = 1
    return H, W


def edge_matrices(graph: RegressionGraph) -> EdgeMatrixPair:
    H, W = edge_arrays(graph)
    u = list(graph.response_nodes)
    labels = graph.labels
    ulabels = tuple(labels[x] for x in u)
    return EdgeMatrixPair(BinaryMatrix(labels, labels, H),
                          BinaryMatrix(ulabels, ulabels, W[np.ix_(u, u)]))


# -- induced matrices --------------------------------------------------------------

def _split(graph: RegressionGraph, b: frozenset[int]) -> tuple[list[int], list[int]]:
    a = [x for x in graph.nodes if x not in b]
    return a, sorted(b)


def induced_arrays(graph: RegressionGraph, b: Iterable[int], *, residual: bool = True,
                   arrays: tuple[np.ndarray, np.ndarray] | None = None
                   ) -> tuple[list[int], list[int], np.ndarray, np.ndarray, np.ndarray]:
    """Induced ``P(a|b)``, ``S(aa|b)``, ``S(bb.a)`` for the split ``N = (a, b)``.

    Returns ``(a, b, P, Saa, Sbb)`` with index lists in graph order.

    With ``residual=True`` the dashed-line matrix that gets closed over ``b``
    is the pattern of the residual covariance of ``(eta_a, eta_b - K_ba eta_a)``.
    It adds to ``W`` the couplings created by ``a``-line paths ending in arrows
    into ``b``, which is what makes conditioning on a common response open a
    collision.  Context nodes of ``b`` drop out of it exactly.

    With ``residual=False`` the closed matrix is ``W_uu`` alone, with the
    context block taken from ``K``.  That variant misses collisions formed by
    arrows into ``b`` and is kept for comparison only.
    """
    H, W = arrays if arrays is not None else edge_arrays(graph)
    bset = frozenset(b)
    a, b = _split(graph, bset)
    K = zer(H, a)
    if not residual:
        return (a, b, *_induced_w_only(graph, H, W, K, a, b))

    ctx = set(graph.context_nodes)
    au = [x for x in a if x not in ctx]
    av = [x for x in a if x in ctx]
    bu = [x for x in b if x not in ctx]
    bv = [x for x in b if x in ctx]
    ix = np.ix_
    Kbu_au = K[ix(bu, au)]
    # directed a_u-line paths from context nodes of a into responses of b
    Hhat = zer(H, au)[ix(bu, av)]

    order = au + av + bu
    pos = {x: p for p, x in enumerate(order)}
    nu, nv = len(au), len(av)
    sau, sav, sbu = slice(0, nu), slice(nu, nu + nv), slice(nu + nv, len(order))
    V = np.zeros((len(order), len(order)), dtype=np.int64)
    V[sau, sau] = W[ix(au, au)]
    V[sav, sav] = H[ix(av, av)]
    Vab = W[ix(au, bu)].astype(np.int64) + W[ix(au, au)].astype(np.int64) @ Kbu_au.T
    V[sau, sbu] = Vab
    V[sbu, sau] = Vab.T
    V[sav, sbu] = Hhat.T
    V[sbu, sav] = Hhat
    Vbb = (W[ix(bu, bu)].astype(np.int64)
           + Kbu_au.astype(np.int64) @ W[ix(au, bu)]
           + W[ix(bu, au)].astype(np.int64) @ Kbu_au.T
           + Kbu_au.astype(np.int64) @ W[ix(au, au)] @ Kbu_au.T
           + Hhat.astype(np.int64) @ K[ix(av, av)] @ Hhat.T)
    V[sbu, sbu] = Vbb
    Q = zer(indicator(V), range(nu + nv, len(order)))

    apos = [pos[x] for x in a]
    bupos = [pos[x] for x in bu]
    Kaa, Kab = K[ix(a, a)], K[ix(a, b)]
    Kbu_b = K[ix(bu, b)]
    Qa_bu = Q[ix(apos, bupos)]
    P = indicator(Kab.astype(np.int64) + _mul(Kaa, Qa_bu, Kbu_b))
    Saa = _mul(Kaa, Q[ix(apos, apos)], Kaa.T)
    Sbb = _mul(Kbu_b.T, Q[ix(bupos, bupos)], Kbu_b).astype(np.int64)
    bvpos = [b.index(x) for x in bv]
    Sbb[ix(bvpos, bvpos)] += K[ix(bv, bv)]
    return a, b, P, Saa, indicator(Sbb)


def _induced_w_only(graph, H, W, K, a, b):
    n = len(graph)
    u = list(graph.response_nodes)
    v = list(graph.context_nodes)
    Q = np.zeros((n, n), dtype=np.uint8)
    bpos_u = [p for p, x in enumerate(u) if x in set(b)]
    Q[np.ix_(u, u)] = zer(W[np.ix_(u, u)], bpos_u)
    Q[np.ix_(v, v)] = K[np.ix_(v, v)]
    ix = np.ix_
    P = indicator(K[ix(a, b)].astype(np.int64) + _mul(K[ix(a, a)], Q[ix(a, b)], K[ix(b, b)]))
    Saa = _mul(K[ix(a, a)], Q[ix(a, a)], K[ix(a, a)].T)
    Sbb = _mul(H[ix(b, b)].T, Q[ix(b, b)], H[ix(b, b)])
    return P, Saa, Sbb


def _query_split(graph: RegressionGraph, alpha, beta, c):
    al, be = graph.indices(alpha), graph.indices(beta)
    cc = graph.indices(c or ())
    if not al or not be:
        raise QueryError("alpha and beta must be nonempty")
    if al & be or al & cc or be & cc:
        raise QueryError("alpha, beta and c must be disjoint")
    return al, be, cc


def induced_matrices(graph: RegressionGraph, alpha: Iterable[str], beta: Iterable[str],
                     c: Iterable[str] = (), *, residual: bool = True) -> InducedTriple:
    """Induced edge matrices for ``a = alpha + m`` regressed on ``b = beta + c``."""
    al, be, cc = _query_split(graph, alpha, beta, c)
    a, b, P, Saa, Sbb = induced_arrays(graph, be | cc, residual=residual)
    la = tuple(graph.labels[x] for x in a)
    lb = tuple(graph.labels[x] for x in b)
    return InducedTriple(BinaryMatrix(la, lb, P), BinaryMatrix(la, la, Saa),
                         BinaryMatrix(lb, lb, Sbb))


def implies(graph: RegressionGraph, alpha: Iterable[str], beta: Iterable[str],
            c: Iterable[str] = (), *, residual: bool = True) -> QueryVerdict:
    """Edge criterion: independent iff the ``alpha x beta`` block of ``P`` is zero."""
    tri = induced_matrices(graph, alpha, beta, c, residual=residual)
    al = sorted(graph.indices(alpha))
    be = sorted(graph.indices(beta))
    block = tri.P.sub([graph.labels[x] for x in al], [graph.labels[x] for x in be])
    hits = tuple(block.ones(off_diagonal=False))
    return QueryVerdict(independent=not hits, engine="matrix",
                        assumes_dependence_base=bool(hits), witnesses=hits)


def induced_subgraph_query(graph: RegressionGraph, alpha: Iterable[str], beta: Iterable[str],
                           c: Iterable[str] = (), *, residual: bool = True) -> RegressionGraph:
    """Graph on ``alpha + beta`` read off the induced matrices.

    Arrows run from ``beta`` into ``alpha``, dashed lines join ``alpha`` nodes,
    full lines join ``beta`` nodes.  ``alpha`` nodes become response
    components and ``beta`` nodes context components, so the result is a
    valid regression graph.
    """
    tri = induced_matrices(graph, alpha, beta, c, residual=residual)
    al = [graph.labels[x] for x in sorted(graph.indices(alpha))]
    be = [graph.labels[x] for x in sorted(graph.indices(beta))]
    arrows = tri.P.sub(al, be).ones(off_diagonal=False)
    dashed = [(x, y) for x, y in tri.Saa.sub(al, al).ones() if x < y]
    full = [(x, y) for x, y in tri.Sbb.sub(be, be).ones() if x < y]
    comps = [("response", sorted(p, key=al.index)) for p in _pieces(al, dashed)]
    comps += [("context", sorted(p, key=be.index)) for p in _pieces(be, full)]
    return RegressionGraph.build(comps, arrows=arrows, dashed=dashed, full=full)


def _pieces(nodes: Sequence[str], pairs: Iterable[tuple[str, str]]) -> list[set[str]]:
    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in pairs:
        parent[find(x)] = find(y)
    groups: dict[str, set[str]] = {}
    for x in nodes:
        groups.setdefault(find(x), set()).add(x)
    return sorted(groups.values(), key=lambda g: min(nodes.index(x) for x in g))


def independence_table(graph: RegressionGraph, *, residual: bool = True
                       ) -> dict[tuple[int, int, frozenset[int]], bool]:
    """Verdict for every ordered ``(i, k, c)``, one induced ``P`` per split.

    For ``b = {k} + c`` the column ``k`` of ``P(a|b)`` answers every query
    ``(i, k, c)`` with ``i`` in ``a``.
    """
    arrays = edge_arrays(graph)
    n = len(graph)
    out = {}
    for mask in range(1, 1 << n):
        bset = frozenset(x for x in range(n) if mask >> x & 1)
        if len(bset) == n:
            continue
        a, b, P, _, _ = induced_arrays(graph, bset, residual=residual, arrays=arrays)
        for q, k in enumerate(b):
            cc = bset - {k}
            for p, i in enumerate(a):
                out[(i, k, cc)] = not P[p, q]
    return out
