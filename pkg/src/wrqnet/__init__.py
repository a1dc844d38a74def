"""Weakly-regular quantum-network capacity toolkit.

Constructs weakly-regular lattices, predicts optimal end-to-end (flooding)
capacities from closed-form cut bounds, verifies the predictions with an
exact max-flow/min-cut solver, and compares fibre networks against satellite
links on daily secret-key rates.
"""

from .capacity import (DEFAULT_FIBRE, FibreParams, critical_density,
                       flooding_bounds, inverse_plob_length, max_link_length,
                       min_nodal_density, neighborhood_max_link_length,
                       plob_capacity, threshold_capacity,
                       waxman_expected_capacity, with_plob_capacities)
from .flow import (CutResult, FlowProblem, MaxFlowSolver, VerificationReport,
                   brute_force_min_cut, bulk_min_cut, flooding_capacity,
                   menger_cardinality, min_neighborhood_capacity,
                   verify_threshold_theorem)
from .lattice import (LatticeFamily, LatticeSpec, WrnCharacteristics, build,
                      build_lattice, characteristics, node_count,
                      select_deep_users, validate_wrn)
from .netgraph import (Edge, Network, UserPair, dump_network, load_network,
                       network_from_json, network_to_json)
from .satcomp import (PRESETS, SatConfig, calibrate_transit_time,
                      critical_separation, daily_advantage, sat_daily_rate,
                      wrn_daily_rate)

__version__ = "1.0.0"

__all__ = [
    "DEFAULT_FIBRE", "FibreParams", "critical_density", "flooding_bounds",
    "inverse_plob_length", "max_link_length", "min_nodal_density",
    "neighborhood_max_link_length", "plob_capacity", "threshold_capacity",
    "waxman_expected_capacity", "with_plob_capacities",
    "CutResult", "FlowProblem", "MaxFlowSolver", "VerificationReport",
    "brute_force_min_cut", "bulk_min_cut", "flooding_capacity",
    "menger_cardinality", "min_neighborhood_capacity",
    "verify_threshold_theorem",
    "LatticeFamily", "LatticeSpec", "WrnCharacteristics", "build",
    "build_lattice", "characteristics", "node_count", "select_deep_users",
    "validate_wrn",
    "Edge", "Network", "UserPair", "dump_network", "load_network",
    "network_from_json", "network_to_json",
    "PRESETS", "SatConfig", "calibrate_transit_time", "critical_separation",
    "daily_advantage", "sat_daily_rate", "wrn_daily_rate",
]
