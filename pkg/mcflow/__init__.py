"""mcflow: feasible flow regions of k-commodity networks."""

from .cuts import Cut, cut_capacity, disjoint_capacity, enumerate_cuts, pairwise_bound, pairwise_capacity, total_capacity
from .cycles import cycle_basis, decide
from .document import NetworkDocument, parse_network
from .gluing import brute_force, feasible_flows, mutual_capacity
from .model import Arc, EnhancedNetwork, Flow, FlowVerdict, Network, build_network, check_flow, flow_value
from .ratio import RatioProblem, int_ratio_max, ratio_max
from .vector import CommodityVector

__all__ = [
    "Arc",
    "CommodityVector",
    "Cut",
    "EnhancedNetwork",
    "Flow",
    "FlowVerdict",
    "Network",
    "NetworkDocument",
    "RatioProblem",
    "brute_force",
    "build_network",
    "check_flow",
    "cut_capacity",
    "cycle_basis",
    "decide",
    "disjoint_capacity",
    "enumerate_cuts",
    "feasible_flows",
    "flow_value",
    "int_ratio_max",
    "mutual_capacity",
    "pairwise_bound",
    "pairwise_capacity",
    "parse_network",
    "ratio_max",
    "total_capacity",
]
