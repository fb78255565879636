"""Exact influence spread under the independent cascade model via shared BDDs."""
from .bdd import Bdd, NodeBudgetExceeded, NodeStore
from .frontier import ConnectivityForest, build_multi, build_single, prune_edges
from .graph import ProbGraph, load_graph, reachable_set, suffix_closures
from .maximize import greedy
from .ordering import EdgeOrder, beam_search_order, frontier_profile
from .spread import (ImpossibleEvidence, conditional_spread, influence_spread,
                     spread_gradient, update_probabilities)

__all__ = [
    "Bdd", "NodeBudgetExceeded", "NodeStore",
    "ConnectivityForest", "build_multi", "build_single", "prune_edges",
    "ProbGraph", "load_graph", "reachable_set", "suffix_closures",
    "greedy",
    "EdgeOrder", "beam_search_order", "frontier_profile",
    "ImpossibleEvidence", "conditional_spread", "influence_spread", "spread_gradient",
    "update_probabilities",
]
