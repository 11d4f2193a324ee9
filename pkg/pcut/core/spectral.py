"""
Spectral clustering on graph Laplacians.

RCut uses the unnormalized Laplacian D - W; NCut the symmetric normalized
Laplacian with row-normalized embeddings. Rows are discretized by k-means with
k-means++ seeding and restarts.
"""

import math
from typing import Optional, Union

import numpy as np
import scipy.linalg
from loguru import logger
from scipy import sparse
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh

from pcut.core.exceptions import NumericalError, ParamError
from pcut.core.models import Objective, Partition, SpectralEmbedding
from pcut.core.settings import PCutSettings, get_settings
from pcut.data.generators import make_rng
from pcut.graphs.base import Graph
from pcut.graphs.cut import cluster_cuts

SHIFT = -1e-3
KMEANS_MAX_ITER = 300


def laplacian(graph: Graph, objective: Objective = Objective.RCUT) -> sparse.csr_matrix:
    """
    Graph Laplacian for an objective.

    rcut gives L = D - W; ncut gives I - D^-1/2 W D^-1/2 with a zero D^-1/2 entry
    for isolated nodes.

    Examples:
        >>> laplacian(single_edge).toarray()
        array([[ 1., -1.],
               [-1.,  1.]])
    """
    w = graph.adjacency
    degrees = graph.degrees()
    if Objective(objective) == Objective.RCUT:
        return (sparse.diags(degrees) - w).tocsr()
    inv_sqrt = np.zeros_like(degrees)
    np.divide(1.0, np.sqrt(degrees), out=inv_sqrt, where=degrees > 0)
    scale = sparse.diags(inv_sqrt)
    return (sparse.identity(graph.n, format="csr") - scale @ w @ scale).tocsr()


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def embed(
    graph: Graph,
    K: int,
    objective: Objective = Objective.RCUT,
    settings: Optional[PCutSettings] = None,
) -> SpectralEmbedding:
    """
    Bottom-K eigenvectors of the graph Laplacian.

    Graphs up to ``dense_eigen_limit`` nodes use the dense symmetric solver; larger
    ones shift-invert Lanczos (ARPACK). For ncut the rows are normalized to unit
    length, zero rows stay zero.

    Args:
        graph: Graph to embed
        K: Number of eigenvectors, 1 <= K <= n
        objective: rcut or ncut
        settings: Solver limits; defaults to the global settings

    Raises:
        ParamError: If K is out of range
        NumericalError: If the iterative solver does not converge
    """
    settings = settings or get_settings()
    n = graph.n
    if not 1 <= K <= n:
        raise ParamError(f"K must lie in 1..{n}, got {K}")
    lap = laplacian(graph, objective)

    if n <= settings.dense_eigen_limit or K >= n - 1:
        values, vectors = scipy.linalg.eigh(lap.toarray(), subset_by_index=[0, K - 1])
    else:
        try:
            values, vectors = eigsh(
                lap.tocsc(),
                k=K,
                sigma=SHIFT,
                which="LM",
                tol=settings.eigen_tol,
                maxiter=settings.eigen_maxiter,
            )
        except (ArpackNoConvergence, ArpackError) as e:
            raise NumericalError(f"eigensolver did not converge on a {n}-node graph: {e}") from e
        order = np.argsort(values, kind="stable")
        values, vectors = values[order], vectors[:, order]

    vectors = _fix_signs(vectors)
    if Objective(objective) == Objective.NCUT:
        norms = np.linalg.norm(vectors, axis=1, keepdims=True)
        np.divide(vectors, norms, out=vectors, where=norms > 0)
    logger.debug(f"Embedded {n} nodes, smallest eigenvalues {np.round(values[: min(K, 3)], 6).tolist()}")
    return SpectralEmbedding(vectors=vectors, eigenvalues=values)


def _plusplus(x: np.ndarray, K: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding; falls back to the farthest point when every distance is zero."""
    n = x.shape[0]
    centres = np.empty((K, x.shape[1]))
    centres[0] = x[rng.integers(n)]
    closest = np.sum((x - centres[0]) ** 2, axis=1)
    for j in range(1, K):
        total = closest.sum()
        if total > 0:
            pick = rng.choice(n, p=closest / total)
        else:
            pick = int(np.argmax(closest))
        centres[j] = x[pick]
        closest = np.minimum(closest, np.sum((x - centres[j]) ** 2, axis=1))
    return centres


def _repair_empty(x: np.ndarray, labels: np.ndarray, centres: np.ndarray) -> None:
    """Give every empty cluster the point farthest from its centre, taken from a cluster of size > 1."""
    K = centres.shape[0]
    for j in range(K):
        sizes = np.bincount(labels, minlength=K)
        if sizes[j] > 0:
            continue
        dist = np.sum((x - centres[labels]) ** 2, axis=1)
        dist[sizes[labels] <= 1] = -1.0
        donor = int(np.argmax(dist))
        labels[donor] = j
        centres[j] = x[donor]


def _lloyd(x: np.ndarray, centres: np.ndarray) -> tuple:
    K = centres.shape[0]
    labels = None
    for _ in range(KMEANS_MAX_ITER):
        dist = np.sum((x[:, None, :] - centres[None, :, :]) ** 2, axis=2)
        new_labels = np.argmin(dist, axis=1)
        _repair_empty(x, new_labels, centres)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(K):
            centres[j] = x[labels == j].mean(axis=0)
    for j in range(K):
        centres[j] = x[labels == j].mean(axis=0)
    inertia = float(np.sum((x - centres[labels]) ** 2))
    return labels, inertia


def kmeans(
    embedding: Union[SpectralEmbedding, np.ndarray],
    K: int,
    restarts: int = 10,
    seed: int = 0,
) -> Partition:
    """
    Best of ``restarts`` k-means++ runs by within-cluster sum of squares.

    Empty clusters are repaired, so all K labels are used whenever n >= K.

    Args:
        embedding: Spectral embedding or an n x m array of rows
        K: Number of clusters
        restarts: Independent seedings to try
        seed: Seed of the random stream

    Raises:
        ParamError: If n < K or restarts < 1

    Examples:
        >>> rows = np.vstack([np.zeros((5, 2)), np.full((5, 2), 10.0)])
        >>> kmeans(rows, 2, seed=1).assignment.tolist()
        [0, 0, 0, 0, 0, 1, 1, 1, 1, 1]
    """
    x = embedding.vectors if isinstance(embedding, SpectralEmbedding) else np.asarray(embedding, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    n = x.shape[0]
    if K < 1 or n < K:
        raise ParamError(f"cannot form {K} clusters from {n} rows")
    if restarts < 1:
        raise ParamError(f"restarts must be positive, got {restarts}")
    if K == 1:
        return Partition(assignment=np.zeros(n, dtype=np.int64), K=1)

    rng = make_rng(seed)
    best_labels, best_inertia = None, math.inf
    for _ in range(restarts):
        labels, inertia = _lloyd(x, _plusplus(x, K, rng))
        if inertia < best_inertia:
            best_labels, best_inertia = labels, inertia
    return Partition(assignment=best_labels, K=K).canonical()


def spectral_cluster(
    graph: Graph,
    K: int,
    objective: Objective = Objective.RCUT,
    seed: int = 0,
    restarts: Optional[int] = None,
    settings: Optional[PCutSettings] = None,
) -> Partition:
    """
    Embed a graph and discretize the embedding into K clusters.

    The partition's provenance is the graph's parameters.

    Examples:
        >>> spectral_cluster(two_cliques, 2).sizes().tolist()
        [12, 8]
    """
    settings = settings or get_settings()
    restarts = restarts or settings.restarts
    embedding = embed(graph, K, objective, settings)
    partition = kmeans(embedding, K, restarts=restarts, seed=seed)
    return partition.model_copy(update={"provenance": graph.params, "objective": Objective(objective)})


def rcut_ncut_value(graph: Graph, partition: Partition, objective: Objective = Objective.RCUT) -> float:
    """
    RCut or NCut value of a partition.

    Two clusters: RCut = Cut(C, C^c) (n/|C| + n/|C^c|). K-way: RCut = sum_i Cut(C_i, C_i^c) / |C_i|,
    without the factor n. NCut = sum_i Cut(C_i, C_i^c) / vol(C_i) for every K.
    An empty (or zero-volume) cluster gives ``math.inf``.

    Examples:
        >>> rcut_ncut_value(path3, Partition(assignment=[0, 1, 1], K=2))
        4.5
        >>> rcut_ncut_value(path3, Partition(assignment=[0, 1, 2], K=3))
        4.0
    """
    cuts = cluster_cuts(graph, partition)
    if Objective(objective) == Objective.RCUT:
        sizes = partition.sizes().astype(np.float64)
    else:
        sizes = np.bincount(partition.assignment, weights=graph.degrees(), minlength=partition.K)
    if np.any(sizes <= 0):
        return math.inf
    value = float(np.sum(cuts / sizes))
    if Objective(objective) == Objective.RCUT and partition.K == 2:
        return graph.n * value
    return value
