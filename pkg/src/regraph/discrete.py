"""Discrete joint tables, brute-force CI checks and three violating families."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .properties import Counterexample, PropertyId, first_violation, iter_violations

CI_TOL = 1e-10
MAX_PROPERTY_VARIABLES = 6


@dataclass(frozen=True)
class JointTable:
    names: tuple[str, ...]
    probs: np.ndarray = field(compare=False)

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", p)
        if p.ndim != len(self.names):
            raise ValueError("one axis per variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        if (p < 0).any():
            raise ValueError("negative probability")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {p.sum()!r}")

    @property
    def levels(self) -> tuple[int, ...]:
        return self.probs.shape

    def axis(self, name: str) -> int:
        return self.names.index(name)

    def marginal(self, keep: Sequence[str]) -> np.ndarray:
        """Marginal array with axes in the order of ``keep``."""
        keep = list(keep)
        drop = tuple(p for p, n in enumerate(self.names) if n not in keep)
        m = self.probs.sum(axis=drop) if drop else self.probs
        kept = [n for n in self.names if n in keep]
        return np.transpose(m, [kept.index(n) for n in keep]) if keep else np.asarray(m)

    def reorder(self, names: Sequence[str]) -> "JointTable":
        perm = [self.axis(n) for n in names]
        return JointTable(tuple(names), np.transpose(self.probs, perm))


def check_ci(table: JointTable, a: Iterable[str], b: Iterable[str],
             c: Iterable[str] = (), tol: float = CI_TOL) -> bool:
    """``a _||_ b | c`` via ``p(abc) p(c) = p(ac) p(bc)`` in every cell.

    Cells with ``p(c) = 0`` satisfy the identity trivially.
    """
    a, b, c = list(a), list(b), list(c)
    if set(a) & set(b) or set(a) & set(c) or set(b) & set(c):
        raise ValueError("a, b, c must be disjoint")
    pabc = table.marginal(a + b + c)
    la = int(np.prod([table.levels[table.axis(n)] for n in a], dtype=int))
    lb = int(np.prod([table.levels[table.axis(n)] for n in b], dtype=int))
    lc = int(np.prod([table.levels[table.axis(n)] for n in c], dtype=int))
    m = pabc.reshape(la, lb, lc)
    pac = m.sum(axis=1)
    pbc = m.sum(axis=0)
    pc = pac.sum(axis=0)
    lhs = m * pc[None, None, :]
    rhs = pac[:, None, :] * pbc[None, :, :]
    return bool(np.abs(lhs - rhs).max() <= tol)


def table_ci(table: JointTable, tol: float = CI_TOL):
    return lambda a, b, c: check_ci(table, a, b, c, tol)


def check_property(table: JointTable, prop: PropertyId,
                   tol: float = CI_TOL) -> Counterexample | None:
    """First violated instance of ``prop``, or ``None`` when it holds."""
    if len(table.names) > MAX_PROPERTY_VARIABLES:
        raise ValueError(f"at most {MAX_PROPERTY_VARIABLES} variables")
    return first_violation(table_ci(table, tol), table.names, prop)


def property_violations(table: JointTable, prop: PropertyId,
                        tol: float = CI_TOL) -> list[Counterexample]:
    return list(iter_violations(table_ci(table, tol), table.names, prop))


# -- the three families ---------------------------------------------------------

def table1_family(alpha: float) -> JointTable:
    """2x2x3 family with A _||_ B | C and A _||_ B, yet A, B both depend on C."""
    if not alpha > 1:
        raise ValueError("need alpha > 1")
    a = float(alpha)
    cells = np.empty((2, 2, 3))
    cells[:, :, 0] = [[a * a, a], [a, 1]]
    cells[:, :, 1] = [[a, 1], [a * a, a]]
    cells[:, :, 2] = [[1, a * a], [1, a * a]]
    return JointTable(("A", "B", "C"), cells / (4 * (1 + a + a * a)))


def table2_family(alpha: float, beta: float) -> JointTable:
    """2x2x3 family where B and C share information; intersection fails."""
    if not (0 < alpha < 1 and 0 < beta < 1 and alpha != beta and 2 * alpha + beta < 1):
        raise ValueError("need 0 < alpha != beta < 1 and 2 alpha + beta < 1")
    cells = np.zeros((2, 2, 3))
    for k in (0, 1):
        cells[:, 0, k] = [alpha, 1 - alpha]
    cells[:, 1, 2] = [beta, 1 - beta]
    return JointTable(("A", "B", "C"), cells / 3)


def table3_family(alpha: float) -> JointTable:
    """2x2x2 family with A _||_ C and B _||_ C but (A, B) dependent on C."""
    if not 0 < 2 * alpha < 1:
        raise ValueError("need 0 < 2 alpha < 1")
    cells = np.ones((2, 2, 2))
    cells[:, :, 0] = [[1 + 2 * alpha, 1 - 2 * alpha], [1 - 2 * alpha, 1 + 2 * alpha]]
    return JointTable(("A", "B", "C"), cells / 8)


FAMILY_PROPERTY = {
    1: PropertyId.SINGLETON_TRANSITIVITY,
    2: PropertyId.INTERSECTION,
    3: PropertyId.COMPOSITION,
}


# (a, b, c, independent) statements that hold for every member of a family
FAMILY_FACTS = {
    1: [("A", "B", "C", True), ("A", "C", "", False), ("B", "C", "", False),
        ("A", "B", "", True)],
    2: [("A", "B", "C", True), ("A", "C", "B", True), ("A", "BC", "", False),
        ("A", "B", "", False), ("A", "C", "", False)],
    3: [("A", "C", "", True), ("B", "C", "", True), ("AB", "C", "", False),
        ("A", "B", "C", False)],
}


def family_facts(table: JointTable, family: int, tol: float = CI_TOL
                 ) -> list[tuple[str, bool, bool]]:
    """``(statement, expected, observed)`` for each listed fact."""
    out = []
    for a, b, c, want in FAMILY_FACTS[family]:
        got = check_ci(table, list(a), list(b), list(c), tol)
        rel = "_||_" if want else "dep"
        stmt = f"{a} {rel} {b}" + (f" | {c}" if c else "")
        out.append((stmt, want, got))
    return out


def darroch_gap(table: JointTable) -> float:
    """Max ``|sum_k p(i+k) p(+jk) / p(++k) - p(i++) p(+j+)|`` over A, B, C."""
    pac = table.marginal(["A", "C"])
    pbc = table.marginal(["B", "C"])
    pc = table.marginal(["C"])
    lhs = np.einsum("ik,jk,k->ij", pac, pbc, 1.0 / pc)
    rhs = np.outer(table.marginal(["A"]), table.marginal(["B"]))
    return float(np.abs(lhs - rhs).max())


def family_table(family: int, alpha: float, beta: float | None = None) -> JointTable:
    if family == 1:
        return table1_family(alpha)
    if family == 2:
        if beta is None:
            raise ValueError("family 2 needs beta")
        return table2_family(alpha, beta)
    if family == 3:
        return table3_family(alpha)
    raise ValueError(f"unknown family {family}")


def odds_ratio(table: JointTable, x: str, y: str, given: dict[str, int]) -> float:
    """Odds ratio of two binary variables in the slice fixed by ``given``."""
    t = table.reorder([x, y] + [n for n in table.names if n not in (x, y)])
    sl = (slice(None), slice(None)) + tuple(
        given[n] for n in t.names[2:])
    m = t.probs[sl]
    return float(m[0, 0] * m[1, 1] / (m[0, 1] * m[1, 0]))


# -- text grid I/O -------------------------------------------------------------------

def format_table(table: JointTable) -> str:
    """Header ``variables: A=2 B=2 C=3`` then probabilities row-major."""
    head = "variables: " + " ".join(f"{n}={k}" for n, k in zip(table.names, table.levels))
    last = table.levels[-1]
    flat = table.probs.reshape(-1, last)
    rows = [" ".join(repr(float(v)) for v in row) for row in flat]
    return "\n".join([head] + rows) + "\n"


def parse_table(text: str) -> JointTable:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("variables:"):
        raise ValueError("first line must start with 'variables:'")
    names, levels = [], []
    for tok in lines[0][len("variables:"):].split():
        name, _, k = tok.partition("=")
        names.append(name)
        levels.append(int(k))
    values = [float(x) for ln in lines[1:] for x in ln.split()]
    if len(values) != int(np.prod(levels)):
        raise ValueError(f"expected {int(np.prod(levels))} probabilities, got {len(values)}")
    return JointTable(tuple(names), np.array(values).reshape(levels))
