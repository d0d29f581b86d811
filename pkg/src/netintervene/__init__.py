"""Plan social-network interventions that lower targeted nodes' local clustering
coefficients by adding edges, under LCC-degradation and centrality constraints."""

from .baselines import EnumerationTooLarge, bum, ea, enum_m, enum_s, gd, sim, tea
from .centrality import (CentralityMode, CentralitySnapshot, betweenness, centrality, closeness,
                         pagerank_influence, refresh_after_insert)
from .crpd import crpd, crpd_baseline, feasible_candidates, miss_score, miss_weights
from .graph import (EdgeAdditionEffect, Graph, compute_all_triangle_counts, dump_edge_list,
                    gnp_random_graph, lcc, load_edge_list)
from .harness import ExperimentConfig, TargetRule, run, select_targets, sweep
from .oisa import (lcc_grid, lcc_upper_bound, lower_bound_k_G, oisa, optionality, ponf_select,
                   required_edges)
from .plan import ConfigError, InterventionPlan, NodeMetrics, SolverConfig, audit
from .threshold import ThresholdGraphSpec, is_threshold, partition, random_spec, realize

__all__ = [
    "CentralityMode", "CentralitySnapshot", "ConfigError", "EdgeAdditionEffect", "EnumerationTooLarge",
    "ExperimentConfig", "Graph", "InterventionPlan", "NodeMetrics", "SolverConfig", "TargetRule",
    "ThresholdGraphSpec", "audit", "betweenness", "bum", "centrality", "closeness",
    "compute_all_triangle_counts", "crpd", "crpd_baseline", "dump_edge_list", "ea", "enum_m", "enum_s",
    "feasible_candidates", "gd", "gnp_random_graph", "is_threshold", "lcc", "lcc_grid", "lcc_upper_bound",
    "load_edge_list", "lower_bound_k_G", "miss_score", "miss_weights", "oisa", "optionality",
    "pagerank_influence", "partition", "ponf_select", "random_spec", "realize", "refresh_after_insert",
    "required_edges", "run", "select_targets", "sim", "sweep", "tea",
]

__version__ = "0.1.0"
