"""Simulator for Byzantine reliable broadcast over multi-hop networks."""

from .adversary import AdversaryKind
from .cutset import PathSetCollection, has_disjoint_paths, min_cut_at_least
from .engine import ExperimentConfig, RunMetrics, run, sweep
from .policy import PolicyKind
from .protocol import ProtocolKind
from .topology import Graph, TopologyKind, generate, pair_connectivity, vertex_connectivity

__all__ = [
    "AdversaryKind",
    "ExperimentConfig",
    "Graph",
    "PathSetCollection",
    "PolicyKind",
    "ProtocolKind",
    "RunMetrics",
    "TopologyKind",
    "generate",
    "has_disjoint_paths",
    "min_cut_at_least",
    "pair_connectivity",
    "run",
    "sweep",
    "vertex_connectivity",
]
