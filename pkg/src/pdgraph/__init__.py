"""Partial-duplication random graphs with edge deletion: simulation, dual processes and theory."""

__version__ = "0.1.0"

from .graph import Graph, GraphError, EdgeListError, EdgeRef, builtin_graph, parse_edge_list  # noqa: E402
from .sim import SimParams, Trajectory, run, run_replicas  # noqa: E402

__all__ = [
    "EdgeListError",
    "EdgeRef",
    "Graph",
    "GraphError",
    "SimParams",
    "Trajectory",
    "builtin_graph",
    "parse_edge_list",
    "run",
    "run_replicas",
]
