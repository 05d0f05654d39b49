"""Unsupervised scoring of graph embeddings with the Geometric Chung-Lu model."""

from .blocks import BlockVectors
from .clustering import Partition, community_strength, ecg, louvain, modularity
from .divergence import (
    DEFAULT_GRID, ScoreParams, ScoreReport, delta_alpha, divergence_score, jsd,
    kendall_tau, observed_block_proportions, rank_embeddings,
)
from .embedding import Embedding, distance, distance_extremes, parse_embedding, read_embedding
from .errors import ConvergenceError, GclError, InfeasibleDegreeError, InputError
from .gcl import (
    GclModel, edge_probability, expected_block_proportions, feasibility_check, fit_weights,
    g_alpha, sample_graph,
)
from .graph import Graph, degree_sequence, largest_connected_component, parse_edge_list, read_edge_list

__version__ = "0.1.0"
