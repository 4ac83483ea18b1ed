"""Game of Thieves centrality, classical centralities and correlation experiments."""

from .centrality import (
    CentralityVector,
    betweenness_centrality,
    closeness_centrality,
    clustering_coefficient,
    degree_centrality,
)
from .generators import GenSpec, gen_ba_tf, gen_er, gen_nws
from .got import GotConfig, GotState, Thief, run_got, step_empty_thief, step_loaded_thief
from .graph import Graph, GraphError, connected_components
from .graph_io import ParseError, load_graph, parse_edge_list, parse_gml, write_centrality_csv
from .stats import kendall, pearson, rank, spearman

__version__ = "0.1.0"

__all__ = [
    "CentralityVector",
    "GenSpec",
    "GotConfig",
    "GotState",
    "Graph",
    "GraphError",
    "ParseError",
    "Thief",
    "betweenness_centrality",
    "closeness_centrality",
    "clustering_coefficient",
    "connected_components",
    "degree_centrality",
    "gen_ba_tf",
    "gen_er",
    "gen_nws",
    "kendall",
    "load_graph",
    "parse_edge_list",
    "parse_gml",
    "pearson",
    "rank",
    "run_got",
    "spearman",
    "step_empty_thief",
    "step_loaded_thief",
    "write_centrality_csv",
]
