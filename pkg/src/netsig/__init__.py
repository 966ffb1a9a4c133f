"""Statistically significant communities under the configuration model.

The package scores a node set by an exact upper bound on the probability
that a degree-preserving random rewiring of the graph places at least as
many edges inside the set, and grows significant communities from
high-clustering seeds by greedily minimizing that bound.  Supporting pieces:
exhaustive/Monte-Carlo null-model oracles, cover-agreement metrics (ONMI,
purity, pair counting), and classic per-community scores for comparison.
"""

from __future__ import annotations

import logging

from .detect import (
    DetectedCommunity,
    DetectionConfig,
    DetectionResult,
    detect,
    merge_redundant,
    search_one_community,
    select_seed,
)
from .graph import (
    CommunityStats,
    Graph,
    GraphParseError,
    clustering_coefficient,
    community_stats,
    load_edge_list,
    loads_edge_list,
    stats_add_node,
    stats_remove_node,
)
from .metrics import (
    Cover,
    MetricsReport,
    PairConfusion,
    cover_from_memberships,
    evaluate_covers,
    f_measure,
    load_membership_file,
    onmi,
    pair_confusion,
    precision,
    purity,
    rand_index,
    recall,
    spearman,
)
from .nullmodel import (
    ENUMERATION_MAX_EDGES,
    MCPValue,
    PairingOutcome,
    enumerate_pairing_outcomes,
    exact_pvalue,
    mc_pvalue,
)
from .significance import (
    EXACT,
    STIRLING,
    LogFactorialTable,
    LogPValue,
    conductance,
    log_binomial,
    log_distinct_graphs,
    log_factorial,
    log_pairings_count,
    log_pvalue_bound,
    modularity_single,
    ratio_cut,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # graph
    "Graph",
    "GraphParseError",
    "CommunityStats",
    "load_edge_list",
    "loads_edge_list",
    "clustering_coefficient",
    "community_stats",
    "stats_add_node",
    "stats_remove_node",
    # significance
    "EXACT",
    "STIRLING",
    "LogFactorialTable",
    "LogPValue",
    "log_factorial",
    "log_binomial",
    "log_pvalue_bound",
    "log_pairings_count",
    "log_distinct_graphs",
    "conductance",
    "ratio_cut",
    "modularity_single",
    # detection
    "DetectionConfig",
    "DetectedCommunity",
    "DetectionResult",
    "detect",
    "search_one_community",
    "merge_redundant",
    "select_seed",
    # metrics
    "Cover",
    "PairConfusion",
    "MetricsReport",
    "onmi",
    "purity",
    "pair_confusion",
    "rand_index",
    "precision",
    "recall",
    "f_measure",
    "spearman",
    "evaluate_covers",
    "load_membership_file",
    "cover_from_memberships",
    # null model
    "ENUMERATION_MAX_EDGES",
    "PairingOutcome",
    "MCPValue",
    "enumerate_pairing_outcomes",
    "exact_pvalue",
    "mc_pvalue",
]

logging.getLogger(__name__).addHandler(logging.NullHandler())
