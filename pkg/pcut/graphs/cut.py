"""
Cut values of partitions on a graph.
"""

from typing import Optional

import numpy as np

from pcut.core.exceptions import ShapeError
from pcut.core.models import Partition
from pcut.graphs.base import Graph


def _check_shape(graph: Graph, partition: Partition) -> None:
    if partition.n != graph.n:
        raise ShapeError(f"partition covers {partition.n} nodes, graph has {graph.n}")


def crossing_weight(graph: Graph, partition: Partition) -> float:
    """Total weight of edges whose endpoints lie in different clusters, each edge counted once."""
    _check_shape(graph, partition)
    u, v, w = graph.edges()
    labels = partition.assignment
    return float(w[labels[u] != labels[v]].sum())


def cluster_cuts(graph: Graph, partition: Partition) -> np.ndarray:
    """Cut(C_i, complement of C_i) for every cluster i."""
    _check_shape(graph, partition)
    u, v, w = graph.edges()
    labels = partition.assignment
    crossing = labels[u] != labels[v]
    cuts = np.bincount(labels[u][crossing], weights=w[crossing], minlength=partition.K)
    cuts += np.bincount(labels[v][crossing], weights=w[crossing], minlength=partition.K)
    return cuts


def cut_value(graph: Graph, partition: Partition, kway: Optional[bool] = None) -> float:
    """
    Cut value of a partition.

    The binary form is the crossing weight; the K-way form sums Cut(C_i, C_i^c)
    over clusters, which counts every crossing edge twice.

    Args:
        graph: Graph the cut is measured on
        partition: Partition of all graph nodes
        kway: Force the K-way form; defaults to K > 2

    Raises:
        ShapeError: If the partition does not cover exactly the graph's nodes

    Examples:
        >>> cut_value(triangle, Partition(assignment=[0, 1, 1], K=2))
        2.0
        >>> cut_value(triangle, Partition(assignment=[0, 1, 2], K=3))
        6.0
    """
    if kway is None:
        kway = partition.K > 2
    crossing = crossing_weight(graph, partition)
    return 2.0 * crossing if kway else crossing
