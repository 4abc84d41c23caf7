"""PC causal discovery with automatic selection of the significance level."""

from .graph import (Edge, GraphError, MixedGraph, SepsetMap, apply_meek_rules, d_separated,
                    dag_to_cpdag, orient_colliders, parents_in_pdag)
from .independence import CiQuery, Dataset, DSepOracle, FisherZTest, correlation_matrix
from .metrics import EdgeConfusion, edge_confusion, f1, mcc, normalized_shd, shd
from .pc import PcConfig, PcRunStats, run_pc, run_pc_restricted, skeleton_restricted, skeleton_stable
from .selection import AlphaGrid, SelectionResult, autopc, metric_registry

__version__ = "0.1.0"
