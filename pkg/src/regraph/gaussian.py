"""Gaussian linear sequences of regressions as a numeric oracle.

A system ``H Y = eta`` with ``cov(eta) = W`` is generated over a graph:

* ``H`` has unit diagonal on the response blocks, a nonzero entry for each
  arrow, and the marginal concentration matrix of the context variables in
  its context block,
* ``W`` is block diagonal; response blocks carry the dashed-line pattern and
  the context block repeats the concentration matrix.

So ``Sigma = H^-1 W H^-T`` and the context covariance is the inverse of the
concentration matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .edge_matrix import edge_arrays, induced_arrays
from .graph import EdgeKind, RegressionGraph
from .paths import independence_table

DEFAULT_TOL = 1e-9
DEFAULT_MAGNITUDE = (0.3, 1.0)


@dataclass(frozen=True)
class GaussianSystem:
    graph: RegressionGraph
    H: np.ndarray = field(compare=False)
    W: np.ndarray = field(compare=False)


def _draw_rng(seed: int, draw: int) -> np.random.Generator:
    # (seed, draw) feeds a SeedSequence, so draws are independent streams
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(draw)]))


def _dominant_block(n: int, pairs: Sequence[tuple[int, int]], rng) -> np.ndarray:
    """Unit diagonal, nonzero entries at ``pairs``, rows strictly diagonally dominant."""
    m = np.eye(n)
    if not pairs:
        return m
    deg = np.zeros(n, dtype=int)
    for p, q in pairs:
        deg[p] += 1
        deg[q] += 1
    hi = min(0.3, 0.9 / deg.max())
    for p, q in pairs:
        val = rng.uniform(hi / 3, hi) * rng.choice((-1.0, 1.0))
        m[p, q] = m[q, p] = val
    return m


def sample_system(graph: RegressionGraph, seed: int = 0,
                  magnitude: tuple[float, float] = DEFAULT_MAGNITUDE,
                  draw: int = 0) -> GaussianSystem:
    """Random parameters whose zero pattern is exactly the graph's."""
    lo, hi = magnitude
    if not 0 < lo <= hi:
        raise ValueError("magnitude range must satisfy 0 < lo <= hi")
    rng = _draw_rng(seed, draw)
    n = len(graph)
    H = np.eye(n)
    W = np.zeros((n, n))
    for e in sorted(graph.edges_of(EdgeKind.ARROW), key=lambda e: (e.i, e.k)):
        H[e.i, e.k] = rng.uniform(lo, hi) * rng.choice((-1.0, 1.0))
    for comp in graph.components:
        nodes = list(comp.nodes)
        pos = {x: p for p, x in enumerate(nodes)}
        kind = EdgeKind.DASHED if comp.kind.value == "response" else EdgeKind.FULL
        pairs = sorted((pos[e.i], pos[e.k]) for e in graph.edges_of(kind) if e.i in pos)
        block = _dominant_block(len(nodes), pairs, rng)
        W[np.ix_(nodes, nodes)] = block
        if kind is EdgeKind.FULL:
            H[np.ix_(nodes, nodes)] = block
    return GaussianSystem(graph, H, W)


def joint_covariance(system: GaussianSystem) -> np.ndarray:
    """``H^-1 W H^-T`` via two linear solves."""
    H, W = system.H, system.W
    if abs(np.linalg.det(H)) < 1e-12:
        raise np.linalg.LinAlgError("H is singular")
    X = np.linalg.solve(H, W)
    S = np.linalg.solve(H, X.T).T
    return (S + S.T) / 2


def standardize(sigma: np.ndarray) -> np.ndarray:
    d = 1.0 / np.sqrt(np.diag(sigma))
    return sigma * np.outer(d, d)


def partial_covariance(sigma: np.ndarray, i: int, k: int, c: Iterable[int] = ()) -> float:
    """``Sigma_ik - Sigma_ic Sigma_cc^-1 Sigma_ck``."""
    c = list(c)
    if i in c or k in c:
        raise ValueError("c must exclude i and k")
    val = sigma[i, k]
    if c:
        val -= sigma[i, c] @ np.linalg.solve(sigma[np.ix_(c, c)], sigma[c, k])
    return float(val)


def _block(m: np.ndarray, rows, cols) -> np.ndarray:
    # plain fancy indexing; np.ix_ is slow in the oracle's inner loop
    return m[np.asarray(rows, dtype=np.intp)[:, None], np.asarray(cols, dtype=np.intp)]


def conditional_covariance(sigma: np.ndarray, a: Sequence[int], b: Sequence[int]) -> np.ndarray:
    a, b = list(a), list(b)
    if not b:
        return _block(sigma, a, a)
    return _block(sigma, a, a) - _block(sigma, a, b) @ np.linalg.solve(
        _block(sigma, b, b), _block(sigma, b, a))


def gaussian_ci(sigma: np.ndarray, a: Sequence[int], b: Sequence[int],
                c: Sequence[int] = (), tol: float = DEFAULT_TOL) -> bool:
    """Set-valued CI: the ``a x b`` block of ``Sigma`` given ``c`` vanishes."""
    a, b, c = list(a), list(b), list(c)
    block = sigma[np.ix_(a, b)]
    if c:
        block = block - sigma[np.ix_(a, c)] @ np.linalg.solve(
            sigma[np.ix_(c, c)], sigma[np.ix_(c, b)])
    return bool(np.abs(block).max() <= tol)


# -- oracle ------------------------------------------------------------------------

@dataclass
class TripleCheck:
    i: str
    k: str
    c: tuple[str, ...]
    implied_independent: bool
    max_abs: float
    n_nonzero: int


@dataclass
class OracleReport:
    draws: int
    tol: float
    triples: list[TripleCheck]
    violations: list[str]
    containment_violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.containment_violations

    @property
    def max_independent_abs(self) -> float:
        vals = [t.max_abs for t in self.triples if t.implied_independent]
        return max(vals, default=0.0)

    def to_text(self) -> str:
        lines = []
        for t in self.triples:
            verdict = "independent" if t.implied_independent else "dependent"
            cond = ",".join(t.c) or "-"
            lines.append(f"{t.i} {t.k} | {cond}: {verdict} max|pcov|={t.max_abs:.3e} "
                         f"nonzero={t.n_nonzero}/{self.draws}")
        lines.append(f"max |pcov| over implied independences: {self.max_independent_abs:.3e}")
        for v in self.violations + self.containment_violations:
            lines.append(f"VIOLATION {v}")
        lines.append("result: " + ("ok" if self.ok else "violations found"))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "draws": self.draws, "tol": self.tol, "ok": self.ok,
            "max_independent_abs": self.max_independent_abs,
            "triples": [{"i": t.i, "k": t.k, "c": list(t.c),
                         "implied": "independent" if t.implied_independent else "dependent",
                         "max_abs": t.max_abs, "nonzero": t.n_nonzero}
                        for t in self.triples],
            "violations": self.violations,
            "containment_violations": self.containment_violations,
        }


def _splits(n: int):
    for mask in range(1, (1 << n) - 1):
        yield frozenset(x for x in range(n) if mask >> x & 1)


def induced_patterns(graph: RegressionGraph):
    """Binary ``(a, b, P, Saa, Sbb)`` for every split with ``a`` and ``b`` nonempty."""
    arrays = edge_arrays(graph)
    return [induced_arrays(graph, b, arrays=arrays) for b in _splits(len(graph))]


def containment_violations(graph: RegressionGraph, sigma: np.ndarray, tol: float,
                           patterns=None) -> list[str]:
    """Entries of ``Sigma_ab Sigma_bb^-1``, ``Sigma_aa|b`` and ``(Sigma_bb)^-1``
    exceeding ``tol`` where the induced binary matrix has a zero."""
    out = []
    lab = graph.labels
    for a, b, P, Saa, Sbb in patterns if patterns is not None else induced_patterns(graph):
        Sbb_inv = np.linalg.inv(_block(sigma, b, b))
        Pi = _block(sigma, a, b) @ Sbb_inv
        Caa = _block(sigma, a, a) - Pi @ _block(sigma, b, a)
        for name, num, pat in (("P", Pi, P), ("Saa", Caa, Saa), ("Sbb", Sbb_inv, Sbb)):
            bad = (np.abs(num) > tol) & (pat == 0)
            if bad.any():
                rows = a if name != "Sbb" else b
                cols = b if name != "Saa" else a
                for p, q in zip(*np.nonzero(bad)):
                    out.append(f"{name} split a={{{','.join(lab[x] for x in a)}}}: "
                               f"({lab[rows[p]]},{lab[cols[q]]}) = {num[p, q]:.3e}")
    return out


def oracle_check(graph: RegressionGraph, draws: int = 10, tol: float = DEFAULT_TOL,
                 seed: int = 0, magnitude: tuple[float, float] = DEFAULT_MAGNITUDE,
                 containment: bool = True) -> OracleReport:
    """Compare graph-implied (in)dependences with sampled Gaussian systems.

    Implied independences must vanish in every draw; implied dependences must
    be nonzero in at least ``draws - 1`` draws.  Partial covariances are taken
    on the correlation scale.
    """
    n = len(graph)
    implied = independence_table(graph)
    triples = sorted({(min(i, k), max(i, k), c) for i, k, c in implied},
                     key=lambda t: (len(t[2]), t[0], t[1], sorted(t[2])))
    max_abs = {t: 0.0 for t in triples}
    nonzero = {t: 0 for t in triples}
    cont: list[str] = []
    patterns = induced_patterns(graph) if containment else None
    for d in range(draws):
        sigma = standardize(joint_covariance(sample_system(graph, seed, magnitude, draw=d)))
        by_c: dict[frozenset[int], np.ndarray] = {}
        for i, k, c in triples:
            if c not in by_c:
                rest = [x for x in range(n) if x not in c]
                full = np.zeros((n, n))
                full[np.asarray(rest)[:, None], np.asarray(rest)] = \
                    conditional_covariance(sigma, rest, sorted(c))
                by_c[c] = full
            v = abs(by_c[c][i, k])
            max_abs[(i, k, c)] = max(max_abs[(i, k, c)], v)
            if v > tol:
                nonzero[(i, k, c)] += 1
        if containment:
            cont.extend(f"draw {d}: {msg}"
                        for msg in containment_violations(graph, sigma, tol, patterns))
    lab = graph.labels
    checks, violations = [], []
    for t in triples:
        i, k, c = t
        ind = implied[t]
        chk = TripleCheck(lab[i], lab[k], tuple(lab[x] for x in sorted(c)), ind,
                          max_abs[t], nonzero[t])
        checks.append(chk)
        cond = ",".join(chk.c) or "-"
        if ind and nonzero[t]:
            violations.append(f"{chk.i} _||_ {chk.k} | {cond} implied but "
                              f"|pcov| = {max_abs[t]:.3e}")
        if not ind and nonzero[t] < draws - 1:
            violations.append(f"{chk.i} dep {chk.k} | {cond} implied but nonzero in "
                              f"only {nonzero[t]}/{draws} draws")
    return OracleReport(draws, tol, checks, violations, cont)


# -- a regular family that violates set transitivity ------------------------------

def set_transitivity_family(dim: int, kappa: float, omega: float, R) -> np.ndarray:
    """Covariance ``[[kappa I, R], [R^T, omega I]]`` with ``R`` orthogonal.

    The first ``dim`` variables form ``u``, the last ``dim`` form ``v``.
    """
    R = np.asarray(R, dtype=float)
    if R.shape != (dim, dim):
        raise ValueError(f"R must be {dim}x{dim}")
    if not omega > 1:
        raise ValueError("need omega > 1")
    if not kappa > omega + 1:
        raise ValueError("need kappa > omega + 1")
    if not np.allclose(R.T @ R, np.eye(dim), atol=1e-10):
        raise ValueError("R must be orthogonal")
    if (np.abs(R) < 1e-12).any():
        raise ValueError("R must have no zero entries")
    eye = np.eye(dim)
    return np.block([[kappa * eye, R], [R.T, omega * eye]])


def rotation_2d(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def householder(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return np.eye(len(v)) - 2 * np.outer(v, v) / (v @ v)
