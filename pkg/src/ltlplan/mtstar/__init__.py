"""Reduced-graph multi-robot planner."""

from .abstraction import (
    AbstractNode,
    ReducedEdge,
    ReducedGraph,
    concretizations,
    generate_reduced_graph,
    realize_edge,
    simple_cycles_through,
    simple_paths_between,
)
from .completion import GapResult, MemoCache, Segment, solve_gap, solve_gap_exact
from .planner import PlanStats, mtstar_solve

__all__ = [
    "AbstractNode",
    "ReducedEdge",
    "ReducedGraph",
    "concretizations",
    "generate_reduced_graph",
    "realize_edge",
    "simple_cycles_through",
    "simple_paths_between",
    "GapResult",
    "MemoCache",
    "Segment",
    "solve_gap",
    "solve_gap_exact",
    "PlanStats",
    "mtstar_solve",
]
