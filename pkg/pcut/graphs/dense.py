"""
Distance-threshold and fully connected graph constructions: epsilon graphs,
full RBF graphs and full graphs with adaptive (per-node) RBF widths.
"""

import warnings
from typing import Iterator, Optional, Tuple

import numpy as np
from loguru import logger
from scipy.spatial.distance import cdist

from pcut.core.exceptions import EmptyGraphWarning, ParamError
from pcut.core.models import Dataset, GraphKind, GraphParams
from pcut.graphs.base import Graph, GraphBuilder, rbf_weights
from pcut.graphs.neighbors import CHUNK_ROWS, NeighborTable, neighbor_table

ADAPTIVE_NEIGHBOR = 7


def _upper_blocks(points: np.ndarray) -> Iterator[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Yield (u, v, distance) for every pair u < v, one row block at a time."""
    n = points.shape[0]
    for start in range(0, n, CHUNK_ROWS):
        stop = min(start + CHUNK_ROWS, n)
        block = cdist(points[start:stop], points)
        rows, cols = np.nonzero(np.arange(start, stop)[:, None] < np.arange(n)[None, :])
        yield rows + start, cols, block[rows, cols]


class EpsilonBuilder(GraphBuilder):
    """Edge between u and v iff their distance is at most epsilon; RBF-weighted when sigma is set."""

    kind = GraphKind.EPSILON

    def check_params(self, params: GraphParams, n: int) -> None:
        if params.epsilon is None:
            raise ParamError("epsilon graphs need epsilon")

    def build(self, dataset, params, *, rank=None, neighbors=None) -> Graph:
        self.check_params(params, dataset.n)
        us, vs, ws = [], [], []
        for u, v, dist in _upper_blocks(dataset.points):
            keep = dist <= params.epsilon
            us.append(u[keep])
            vs.append(v[keep])
            ws.append(rbf_weights(dist[keep], params.sigma))
        graph = Graph.from_edges(dataset.n, np.concatenate(us), np.concatenate(vs), np.concatenate(ws), params)
        if graph.n_edges == 0:
            message = f"epsilon={params.epsilon:.4g} is below every pairwise distance; the graph has no edges"
            logger.warning(message)
            warnings.warn(message, EmptyGraphWarning, stacklevel=2)
        return graph


class FullRbfBuilder(GraphBuilder):
    """Complete graph with w = exp(-d^2 / (2 sigma^2))."""

    kind = GraphKind.FULL_RBF

    def check_params(self, params: GraphParams, n: int) -> None:
        if params.sigma is None:
            raise ParamError("full RBF graphs need sigma")

    def build(self, dataset, params, *, rank=None, neighbors=None) -> Graph:
        self.check_params(params, dataset.n)
        us, vs, ws = [], [], []
        for u, v, dist in _upper_blocks(dataset.points):
            us.append(u)
            vs.append(v)
            ws.append(rbf_weights(dist, params.sigma))
        # weights that underflow to zero are dropped by from_edges
        return Graph.from_edges(dataset.n, np.concatenate(us), np.concatenate(vs), np.concatenate(ws), params)


def local_scales(dataset: Dataset, neighbors: Optional[NeighborTable] = None) -> np.ndarray:
    """
    Per-node RBF width: distance to the 7th nearest neighbour (or the farthest one when n <= 7).

    Zero widths (duplicate points) are replaced by the smallest positive width.
    """
    rank = min(ADAPTIVE_NEIGHBOR, dataset.n - 1)
    scales = neighbor_table(dataset, rank, neighbors).kth_distance(rank).copy()
    positive = scales[scales > 0]
    scales[scales <= 0] = positive.min() if positive.size else 1.0
    return scales


class AdaptiveRbfBuilder(GraphBuilder):
    """Complete graph with w = exp(-d^2 / (sigma_u sigma_v)), sigma_v from the 7th neighbour."""

    kind = GraphKind.FULL_ARBF

    def check_params(self, params: GraphParams, n: int) -> None:
        pass

    def build(self, dataset, params, *, rank=None, neighbors=None) -> Graph:
        scales = local_scales(dataset, neighbors)
        us, vs, ws = [], [], []
        for u, v, dist in _upper_blocks(dataset.points):
            us.append(u)
            vs.append(v)
            ws.append(np.exp(-(dist**2) / (scales[u] * scales[v])))
        return Graph.from_edges(dataset.n, np.concatenate(us), np.concatenate(vs), np.concatenate(ws), params)


def build_epsilon(dataset: Dataset, params: GraphParams) -> Graph:
    """Build an epsilon graph; warns with ``EmptyGraphWarning`` when no pair is close enough."""
    return EpsilonBuilder().build(dataset, params)


def build_full_rbf(dataset: Dataset, params: GraphParams) -> Graph:
    return FullRbfBuilder().build(dataset, params)


def build_full_arbf(
    dataset: Dataset,
    params: Optional[GraphParams] = None,
    neighbors: Optional[NeighborTable] = None,
) -> Graph:
    """Build the full adaptive-RBF graph."""
    params = params or GraphParams(kind=GraphKind.FULL_ARBF)
    return AdaptiveRbfBuilder().build(dataset, params, neighbors=neighbors)
