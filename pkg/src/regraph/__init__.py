"""Regression graphs: implied independences, edge matrices and numeric oracles."""
from .edge_matrix import (BinaryMatrix, edge_matrices, implies, induced_matrices,
                          induced_subgraph_query, zer)
from .equivalence import compare, markov_equivalent
from .graph import (ComponentKind, EdgeKind, GraphValidationError, RegressionGraph, VKind,
                    anterior_set, classify_v, connected_components, parse_graph,
                    serialize_graph, skeleton)
from .paths import Path, QueryError, find_active_paths, implies_independence, is_active

__all__ = [
    "BinaryMatrix", "ComponentKind", "EdgeKind", "GraphValidationError", "Path",
    "QueryError", "RegressionGraph", "VKind", "anterior_set", "classify_v", "compare",
    "connected_components", "edge_matrices", "find_active_paths", "implies",
    "implies_independence", "induced_matrices", "induced_subgraph_query", "is_active",
    "markov_equivalent", "parse_graph", "serialize_graph", "skeleton", "zer",
]
