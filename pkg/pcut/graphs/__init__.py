"""
Graph constructions for pcut.

Each ``GraphKind`` maps to one ``GraphBuilder``; ``builder_for`` returns it.
"""

from typing import Dict

from pcut.core.exceptions import ParamError
from pcut.core.models import GraphKind
from pcut.graphs.base import Graph, GraphBuilder
from pcut.graphs.cut import cluster_cuts, crossing_weight, cut_value
from pcut.graphs.dense import (
    AdaptiveRbfBuilder,
    EpsilonBuilder,
    FullRbfBuilder,
    build_epsilon,
    build_full_arbf,
    build_full_rbf,
)
from pcut.graphs.knn import (
    BaselineBuilder,
    KnnBuilder,
    RmdBuilder,
    build_baseline,
    build_knn,
    build_rmd,
    modulated_degrees,
)
from pcut.graphs.neighbors import NeighborTable, mean_knn_distance

_BUILDERS: Dict[GraphKind, GraphBuilder] = {
    builder.kind: builder
    for builder in (
        BaselineBuilder(),
        RmdBuilder(),
        KnnBuilder(),
        EpsilonBuilder(),
        FullRbfBuilder(),
        AdaptiveRbfBuilder(),
    )
}


def builder_for(kind: GraphKind) -> GraphBuilder:
    """
    Get the builder for a graph kind.

    Raises:
        ParamError: If no builder is registered for the kind
    """
    try:
        return _BUILDERS[GraphKind(kind)]
    except (KeyError, ValueError):
        raise ParamError(f"no graph builder for kind {kind!r}") from None


__all__ = [
    "Graph",
    "GraphBuilder",
    "NeighborTable",
    "build_baseline",
    "build_epsilon",
    "build_full_arbf",
    "build_full_rbf",
    "build_knn",
    "build_rmd",
    "builder_for",
    "cluster_cuts",
    "crossing_weight",
    "cut_value",
    "mean_knn_distance",
    "modulated_degrees",
]
