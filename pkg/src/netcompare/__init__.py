"""Structural dissimilarity of undirected networks.

The main measure embeds both graphs with DeepWalk and compares the
distributions of node-to-node embedding distances.  Shortest-path,
communicability and hybrid measures, random-graph generators, dk-series
null models and experiment drivers are included.
"""

from .dissimilarity import (
    DissimilarityResult,
    MeasureParams,
    d_c,
    d_m,
    d_ne,
    d_sp,
    dissimilarity,
)
from .embedding import SkipGramConfig, WalkConfig, deepwalk
from .errors import (
    EdgeListError,
    EmptyGraphError,
    InputError,
    NetCompareError,
    NumericError,
    ParameterError,
)
from .generators import GeneratorSpec, barabasi_albert, generate, k_regular_ring, perturb, watts_strogatz
from .graph import Graph, load_graph, read_edge_list, save_graph, write_edge_list
from .metrics import GraphStats, best_modularity, graph_stats, modularity
from .nullmodels import DkOrder, dk1_randomize, dk25_randomize, dk2_randomize, randomize

__version__ = "0.1.0"

__all__ = [
    "DissimilarityResult",
    "MeasureParams",
    "d_c",
    "d_m",
    "d_ne",
    "d_sp",
    "dissimilarity",
    "SkipGramConfig",
    "WalkConfig",
    "deepwalk",
    "EdgeListError",
    "EmptyGraphError",
    "InputError",
    "NetCompareError",
    "NumericError",
    "ParameterError",
    "GeneratorSpec",
    "barabasi_albert",
    "generate",
    "k_regular_ring",
    "perturb",
    "watts_strogatz",
    "Graph",
    "load_graph",
    "read_edge_list",
    "save_graph",
    "write_edge_list",
    "GraphStats",
    "best_modularity",
    "graph_stats",
    "modularity",
    "DkOrder",
    "dk1_randomize",
    "dk25_randomize",
    "dk2_randomize",
    "randomize",
]
