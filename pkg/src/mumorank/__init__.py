"""PageRank-family rankings on unimodal, bipartite and multimodal hypergraphs."""

from .bounds import (
    BoundaryStats,
    BoundReport,
    bound_bipartite_combined,
    bound_mumo,
    bound_theorem_bipartite,
    bound_theorem_lazy,
    bound_theorem_unimodal,
    boundary_stats,
    d0_sat_equal,
    d0_sat_unequal,
    d_sat_equal,
    d_sat_unequal,
    evaluate_bounds,
    observed_outflow,
)
from .config import PreferenceSpec, SolverConfig
from .exceptions import (
    ConfigError,
    ConvergenceError,
    DegenerateSetError,
    HypergraphError,
    InputFormatError,
    MuMoRankError,
    UnknownNodeError,
)
from .hypergraph import (
    GeneralizedGraphView,
    MultimodalHypergraph,
    NodeRef,
    degree,
    generalized_view,
    incident_hyperedges,
    modality_degree_sum,
    validate,
)
from .mumo import MuMoRank, RankVector, build_preference_vector, initial_ranks, mumorank, mumorank_step
from .pagerank import (
    BipartitePageRank,
    PageRank,
    bipartite_pagerank,
    lazy_pagerank,
    preference_vector,
    unimodal_pagerank,
)
from .walker import WalkConfig, WalkSimulator, compare, simulate
from .datasets import load_product_tagging

__version__ = "0.1.0"

__all__ = [
    "BipartitePageRank",
    "BoundReport",
    "BoundaryStats",
    "ConfigError",
    "ConvergenceError",
    "DegenerateSetError",
    "GeneralizedGraphView",
    "HypergraphError",
    "InputFormatError",
    "MuMoRank",
    "MuMoRankError",
    "MultimodalHypergraph",
    "NodeRef",
    "PageRank",
    "PreferenceSpec",
    "RankVector",
    "SolverConfig",
    "UnknownNodeError",
    "WalkConfig",
    "WalkSimulator",
    "bipartite_pagerank",
    "bound_bipartite_combined",
    "bound_mumo",
    "bound_theorem_bipartite",
    "bound_theorem_lazy",
    "bound_theorem_unimodal",
    "boundary_stats",
    "build_preference_vector",
    "compare",
    "d0_sat_equal",
    "d0_sat_unequal",
    "d_sat_equal",
    "d_sat_unequal",
    "degree",
    "evaluate_bounds",
    "generalized_view",
    "incident_hyperedges",
    "initial_ranks",
    "lazy_pagerank",
    "load_product_tagging",
    "modality_degree_sum",
    "mumorank",
    "mumorank_step",
    "observed_outflow",
    "preference_vector",
    "simulate",
    "unimodal_pagerank",
    "validate",
]
