"""Local-view strategies on deterministic interference networks.

Builds the zero-error linear machinery over GF(2) for the linear
deterministic K-user interference channel, a distributed strategy driven
by bounded-hop views, an exhaustive linear single-shot oracle, and the
searches that show where local views cannot match it.
"""

__version__ = "0.1.0"

from .converse import genie_reduce, no_universal_strategy_search
from .counterexamples import builtin_counterexamples, counterexample, replay
from .errors import (ContractViolation, DimensionError, InvalidGainError, InvariantViolation,
                     LocalViewError, NotReducibleError, ScenarioError, SizeGuardError)
from .gf2 import BitMatrix, Subspace, gf2_rank
from .network import (GainMatrix, Topology, class_topology, classify_component, components,
                      connected_components, enumerate_three_user_classes, qualifies)
from .oracle import QUALIFIER, brute_force_sum_capacity, cross_validate, find_encoders
from .runs import simulate, sweep
from .scenario import Scenario, load_scenario, parse_scenario
from .strategy import LevelStrategy, achieved_sum_rate, decodable, distributed_strategy
from .views import NodeId, rx_view, tx_view, view_of

__all__ = [
    "BitMatrix", "ContractViolation", "DimensionError", "GainMatrix", "InvalidGainError",
    "InvariantViolation", "LevelStrategy", "LocalViewError", "NodeId", "NotReducibleError",
    "QUALIFIER", "Scenario", "ScenarioError", "SizeGuardError", "Subspace", "Topology",
    "achieved_sum_rate", "brute_force_sum_capacity", "builtin_counterexamples", "class_topology",
    "classify_component", "components", "connected_components", "counterexample", "cross_validate",
    "decodable", "distributed_strategy", "enumerate_three_user_classes", "find_encoders",
    "genie_reduce", "gf2_rank", "load_scenario", "no_universal_strategy_search", "parse_scenario",
    "qualifies", "replay", "rx_view", "simulate", "sweep", "tx_view", "view_of",
]
