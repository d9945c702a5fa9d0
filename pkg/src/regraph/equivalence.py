"""Markov equivalence of regression graphs: same skeleton, same collision Vs."""
from __future__ import annotations

from dataclasses import dataclass

from .graph import RegressionGraph, VKind, iter_vs, skeleton

CollisionV = tuple[frozenset[str], str]


def collision_vs(graph: RegressionGraph) -> frozenset[CollisionV]:
    lab = graph.labels
    return frozenset((frozenset((lab[i], lab[k])), lab[o])
                     for i, o, k, kind in iter_vs(graph) if kind is VKind.COLLISION)


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    same_skeleton: bool
    only_first: frozenset[CollisionV]
    only_second: frozenset[CollisionV]
    skeleton_diff: tuple[frozenset, frozenset] = (frozenset(), frozenset())


def compare(g1: RegressionGraph, g2: RegressionGraph) -> EquivalenceReport:
    if set(g1.labels) != set(g2.labels):
        raise ValueError("graphs have different node sets")
    s1, s2 = skeleton(g1), skeleton(g2)
    c1, c2 = collision_vs(g1), collision_vs(g2)
    same = s1 == s2
    return EquivalenceReport(same and c1 == c2, same, c1 - c2, c2 - c1, (s1 - s2, s2 - s1))


def markov_equivalent(g1: RegressionGraph, g2: RegressionGraph) -> bool:
    return compare(g1, g2).equivalent
