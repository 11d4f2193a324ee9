"""
Nearest-neighbour graph constructions: the baseline graph, k-NN and rank
modulated degree (RMD) graphs.

All three share one edge rule: node v links to its first ``degree[v]``
neighbours and the directed lists are union-symmetrized.
"""

from typing import Optional, Union

import numpy as np
from loguru import logger

from pcut.core.exceptions import ParamError
from pcut.core.models import Dataset, GraphKind, GraphParams, RankVector
from pcut.graphs.base import Graph, GraphBuilder, pair_distances, rbf_weights, union_pairs
from pcut.graphs.neighbors import NeighborTable, neighbor_table


def modulated_degrees(rank: Union[RankVector, np.ndarray], lam: float, k: int) -> np.ndarray:
    """
    Per-node target degree k * (lam + 2 (1 - lam) R(v)).

    Values are rounded half up and clamped to [1, n - 1].

    Examples:
        >>> modulated_degrees(np.array([0.5, 0.5]), 0.5, 1).tolist()
        [1, 1]
    """
    if not 0.0 <= lam <= 1.0:
        raise ParamError(f"lambda must lie in [0, 1], got {lam}")
    if k < 1:
        raise ParamError(f"k must be positive, got {k}")
    ranks = rank.rank if isinstance(rank, RankVector) else np.asarray(rank, dtype=np.float64)
    n = ranks.size
    raw = k * (lam + 2.0 * (1.0 - lam) * ranks)
    degrees = np.floor(raw + 0.5).astype(np.int64)
    return np.clip(degrees, 1, max(1, n - 1))


def degree_graph(
    dataset: Dataset,
    degrees: np.ndarray,
    sigma: Optional[float],
    params: GraphParams,
    neighbors: Optional[NeighborTable] = None,
) -> Graph:
    """Link every node v to its ``degrees[v]`` nearest neighbours, then union-symmetrize."""
    n = dataset.n
    table = neighbor_table(dataset, int(degrees.max()), neighbors)
    mask = np.arange(table.max_k)[None, :] < degrees[:, None]
    rows = np.nonzero(mask)[0]
    cols = table.order[mask]
    u, v = union_pairs(n, rows, cols)
    weights = rbf_weights(pair_distances(dataset.points, u, v), sigma)
    return Graph.from_edges(n, u, v, weights, params)


def _require_k(params: GraphParams, n: int) -> int:
    if params.k is None:
        raise ParamError(f"{params.kind.value} graphs need k")
    if params.k >= n:
        raise ParamError(f"k={params.k} must be below n={n}")
    return params.k


class BaselineBuilder(GraphBuilder):
    """
    The baseline k0-NN graph G0 used for ranking and for comparing candidates.

    Weights are RBF with sigma = mean k0-NN distance unless sigma is given.
    """

    kind = GraphKind.BASELINE_KNN

    def check_params(self, params: GraphParams, n: int) -> None:
        _require_k(params, n)

    def build(self, dataset, params, *, rank=None, neighbors=None) -> Graph:
        self.check_params(params, dataset.n)
        table = neighbor_table(dataset, params.k, neighbors)
        sigma = params.sigma
        if sigma is None:
            sigma = table.mean_kth_distance(params.k)
            if sigma <= 0:
                logger.warning("Mean k0-NN distance is zero; baseline graph falls back to binary weights")
                sigma = None
            params = params.model_copy(update={"sigma": sigma})
        degrees = np.full(dataset.n, params.k, dtype=np.int64)
        graph = degree_graph(dataset, degrees, sigma, params, table)
        count = graph.n_components()
        if count > 1:
            logger.warning(f"Baseline {params.k}-NN graph has {count} connected components; consider a larger k0")
        return graph


class KnnBuilder(GraphBuilder):
    """Union-symmetrized k-NN graph, RBF-weighted when sigma is set."""

    kind = GraphKind.KNN

    def check_params(self, params: GraphParams, n: int) -> None:
        _require_k(params, n)

    def build(self, dataset, params, *, rank=None, neighbors=None) -> Graph:
        self.check_params(params, dataset.n)
        degrees = np.full(dataset.n, params.k, dtype=np.int64)
        return degree_graph(dataset, degrees, params.sigma, params, neighbors)


class RmdBuilder(GraphBuilder):
    """
    Rank modulated degree graph.

    Node v links to its k_lambda(v) = k (lambda + 2 (1 - lambda) R(v)) nearest
    neighbours, so high-density nodes gain edges and valley nodes lose them.
    With lambda = 1 the result equals the k-NN graph.
    """

    kind = GraphKind.RMD

    def check_params(self, params: GraphParams, n: int) -> None:
        if params.kind != GraphKind.RMD:
            raise ParamError(f"RMD builder got a {params.kind.value} parameter set")
        if params.lam is None:
            raise ParamError("RMD graphs need lambda")
        _require_k(params, n)

    def build(self, dataset, params, *, rank=None, neighbors=None) -> Graph:
        self.check_params(params, dataset.n)
        if rank is None or rank.n != dataset.n:
            raise ParamError("RMD graphs need one rank per node")
        degrees = modulated_degrees(rank, params.lam, params.k)
        return degree_graph(dataset, degrees, params.sigma, params, neighbors)


def build_baseline(
    dataset: Dataset,
    k0: int,
    sigma: Optional[float] = None,
    neighbors: Optional[NeighborTable] = None,
) -> Graph:
    """
    Build the baseline k0-NN graph G0.

    Args:
        dataset: Node set
        k0: Neighbour count, 1 <= k0 < n
        sigma: RBF width; defaults to the mean k0-NN distance
        neighbors: Neighbour table to reuse

    Raises:
        ParamError: If k0 is out of range
    """
    if not 1 <= k0 < dataset.n:
        raise ParamError(f"k0 must lie in 1..{dataset.n - 1}, got {k0}")
    params = GraphParams(kind=GraphKind.BASELINE_KNN, k=k0, sigma=sigma)
    return BaselineBuilder().build(dataset, params, neighbors=neighbors)


def build_knn(dataset: Dataset, params: GraphParams, neighbors: Optional[NeighborTable] = None) -> Graph:
    """Build a union-symmetrized k-NN graph."""
    return KnnBuilder().build(dataset, params, neighbors=neighbors)


def build_rmd(
    dataset: Dataset,
    rank: RankVector,
    params: GraphParams,
    neighbors: Optional[NeighborTable] = None,
) -> Graph:
    """Build an RMD graph from node ranks."""
    return RmdBuilder().build(dataset, params, rank=rank, neighbors=neighbors)
