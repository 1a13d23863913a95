"""Bi-objective minimum spanning trees: sub-graph mutation operators and an NSGA-II harness."""

from .emoa import RunRecord, crowding_distance, nondominated_sort, random_walk, run_nsga2
from .graph import CostVector, Graph, GraphError, NoSpanningTreeError, SpanningTree, UnionFind, dominates
from .indicators import (ReferenceSet, build_reference_set, delta_p, edge_frequency, epsilon_indicator,
                         hypervolume, hypervolume_indicator, nnce)
from .instances import InstanceSpec, generate, read_instance, write_instance
from .mst import ContractError, ScalarizedView, kruskal, kruskal_seeded, weighted_sum_sweep
from .mutation import MutationConfig, Operator, apply, precompute_bias
from .pareto import ParetoArchive, pareto_filter
from .trees import enumerate_pareto_set, enumerate_spanning_trees, prufer_decode, prufer_encode, random_spanning_tree

__version__ = "0.1.0"
