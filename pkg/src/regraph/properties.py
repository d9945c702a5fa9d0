"""Independence properties checked by enumeration against any CI oracle.

A CI oracle is a callable ``ci(a, b, c) -> bool`` over disjoint tuples of
variable names, true when ``a _||_ b | c`` holds.  Only ``c`` (or ``d``) may
be empty.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

CIOracle = Callable[[tuple, tuple, tuple], bool]


class PropertyId(enum.Enum):
    SYMMETRY = "symmetry"
    CONTRACTION = "contraction"
    DECOMPOSITION = "decomposition"
    WEAK_UNION = "weak_union"
    COMPOSITION = "composition"
    INTERSECTION = "intersection"
    SET_TRANSITIVITY = "set_transitivity"
    SINGLETON_TRANSITIVITY = "singleton_transitivity"


@dataclass(frozen=True)
class Counterexample:
    prop: PropertyId
    roles: tuple[tuple[str, tuple[str, ...]], ...]

    def role(self, name: str) -> tuple[str, ...]:
        return dict(self.roles)[name]

    def __str__(self) -> str:
        parts = ", ".join(f"{k}={{{','.join(v)}}}" for k, v in self.roles)
        return f"{self.prop.value} violated at {parts}"


def _subsets(pool: Sequence[str], allow_empty: bool, max_size: int | None = None):
    if allow_empty:
        yield ()
    top = len(pool) if max_size is None else min(max_size, len(pool))
    for r in range(1, top + 1):
        yield from itertools.combinations(pool, r)


def _assignments(variables: Sequence[str], roles: Sequence[tuple[str, bool, bool]]):
    """Disjoint role tuples in a deterministic order.

    ``roles`` lists ``(name, may_be_empty, singleton)``.
    """
    def rec(pool, rest, acc):
        if not rest:
            yield tuple(acc)
            return
        name, empty_ok, single = rest[0]
        for s in _subsets(pool, empty_ok, 1 if single else None):
            remaining = [x for x in pool if x not in s]
            yield from rec(remaining, rest[1:], acc + [(name, s)])
    yield from rec(list(variables), list(roles), [])


class _Cached:
    def __init__(self, ci: CIOracle):
        self.ci = ci
        self.memo: dict = {}

    def __call__(self, a, b, c) -> bool:
        key = (frozenset((frozenset(a), frozenset(b))), frozenset(c))
        if key not in self.memo:
            self.memo[key] = bool(self.ci(tuple(a), tuple(b), tuple(c)))
        return self.memo[key]


_SCHEMAS = {
    PropertyId.SYMMETRY: [("a", False, False), ("b", False, False), ("c", True, False)],
    PropertyId.SINGLETON_TRANSITIVITY: [("i", False, True), ("k", False, True),
                                        ("h", False, True), ("d", True, False)],
}
_DEFAULT_SCHEMA = [("a", False, False), ("b", False, False), ("c", False, False),
                   ("d", True, False)]


def _holds(prop: PropertyId, r: dict, ci: _Cached, raw: CIOracle) -> bool:
    if prop is PropertyId.SYMMETRY:
        # evaluate both orders without the symmetric memo
        return raw(r["a"], r["b"], r["c"]) == raw(r["b"], r["a"], r["c"])
    if prop is PropertyId.SINGLETON_TRANSITIVITY:
        i, k, h, d = r["i"], r["k"], r["h"], r["d"]
        if ci(i, k, d) and ci(i, k, h + d):
            return ci(i, h, d) or ci(k, h, d)
        return True
    a, b, c, d = r["a"], r["b"], r["c"], r["d"]
    if prop is PropertyId.CONTRACTION:
        return (ci(a, b, c + d) and ci(b, c, d)) == ci(a + c, b, d)
    if prop is PropertyId.DECOMPOSITION:
        return not ci(a, b + c, d) or (ci(a, b, d) and ci(a, c, d))
    if prop is PropertyId.WEAK_UNION:
        return not ci(a, b + c, d) or (ci(a, b, c + d) and ci(a, c, b + d))
    if prop is PropertyId.COMPOSITION:
        return not (ci(a, b, d) and ci(a, c, d)) or ci(a, b + c, d)
    if prop is PropertyId.INTERSECTION:
        return not (ci(a, b, c + d) and ci(a, c, b + d)) or ci(a, b + c, d)
    if prop is PropertyId.SET_TRANSITIVITY:
        if ci(a, b, d) and ci(a, b, c + d):
            return ci(a, c, d) or ci(b, c, d)
        return True
    raise ValueError(prop)


def iter_violations(ci: CIOracle, variables: Sequence[str], prop: PropertyId
                    ) -> Iterator[Counterexample]:
    cached = _Cached(ci)
    for roles in _assignments(variables, _SCHEMAS.get(prop, _DEFAULT_SCHEMA)):
        if not _holds(prop, dict(roles), cached, ci):
            yield Counterexample(prop, roles)


def first_violation(ci: CIOracle, variables: Sequence[str], prop: PropertyId
                    ) -> Counterexample | None:
    return next(iter_violations(ci, variables, prop), None)
