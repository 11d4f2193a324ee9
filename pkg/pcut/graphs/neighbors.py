"""
Exact nearest-neighbour tables.

Neighbour lists are sorted by distance with ties broken by the lower node id;
a node never lists itself.
"""

from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist

from pcut.core.exceptions import ParamError
from pcut.core.models import Dataset

CHUNK_ROWS = 512


class NeighborTable:
    """
    The ``max_k`` nearest neighbours of every node, by exact search.

    Attributes:
        order: n x max_k neighbour ids, nearest first
        distances: n x max_k matching distances

    Examples:
        >>> table = NeighborTable(dataset.points, max_k=30)
        >>> table.order[0, :5]
    """

    def __init__(self, points: np.ndarray, max_k: int):
        n = points.shape[0]
        if not 1 <= max_k <= n - 1:
            raise ParamError(f"neighbour count must lie in 1..{n - 1}, got {max_k}")
        self.points = points
        self.max_k = max_k
        self.order = np.empty((n, max_k), dtype=np.int64)
        self.distances = np.empty((n, max_k), dtype=np.float64)

        for start in range(0, n, CHUNK_ROWS):
            stop = min(start + CHUNK_ROWS, n)
            block = cdist(points[start:stop], points)
            block[np.arange(stop - start), np.arange(start, stop)] = np.inf
            # stable sort keeps the lower id first among equal distances
            idx = np.argsort(block, axis=1, kind="stable")[:, :max_k]
            self.order[start:stop] = idx
            self.distances[start:stop] = np.take_along_axis(block, idx, axis=1)

    @property
    def n(self) -> int:
        return int(self.order.shape[0])

    def kth_distance(self, k: int) -> np.ndarray:
        """Distance from every node to its k-th nearest neighbour."""
        if not 1 <= k <= self.max_k:
            raise ParamError(f"k={k} outside the table's 1..{self.max_k}")
        return self.distances[:, k - 1]

    def mean_kth_distance(self, k: int) -> float:
        return float(self.kth_distance(k).mean())


def neighbor_table(dataset: Dataset, max_k: int, reuse: Optional[NeighborTable] = None) -> NeighborTable:
    """Return ``reuse`` when it is deep enough for ``max_k``, else a new table."""
    max_k = min(max_k, dataset.n - 1)
    if reuse is not None and reuse.n == dataset.n and reuse.max_k >= max_k:
        return reuse
    return NeighborTable(dataset.points, max_k)


def mean_knn_distance(dataset: Dataset, k: int, neighbors: Optional[NeighborTable] = None) -> float:
    """
    The mean k-NN distance d~_k: average over nodes of the distance to the k-th neighbour.

    Raises:
        ParamError: If k is not in 1..n-1
    """
    if not 1 <= k <= dataset.n - 1:
        raise ParamError(f"k must lie in 1..{dataset.n - 1}, got {k}")
    return neighbor_table(dataset, k, neighbors).mean_kth_distance(k)
