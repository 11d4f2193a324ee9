"""
Density ranks from nearest-neighbour distances.

The statistic eta(v) is the mean distance from v to its baseline neighbours; the
rank R(v) is the fraction of nodes whose eta is at least eta(v), so dense regions
get ranks near 1 and valleys ranks near 1/n.
"""

import math
from typing import Optional, Tuple

import numpy as np
from loguru import logger
from scipy import optimize, stats

from pcut.core.exceptions import IsolatedNodeError, NumericalError, ParamError
from pcut.core.models import Dataset, DensitySpec, GraphKind, RankVector, UniformSpec
from pcut.data import densities
from pcut.data.generators import make_rng
from pcut.graphs.base import Graph
from pcut.graphs.knn import build_baseline
from pcut.graphs.neighbors import NeighborTable, neighbor_table

PVALUE_SAMPLES = 200_000
_KNN_KINDS = (GraphKind.BASELINE_KNN, GraphKind.KNN)


def _neighbor_distances(
    dataset: Dataset, baseline: Graph, neighbors: Optional[NeighborTable]
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Per-node sorted neighbour distances as a padded matrix plus the neighbour count per node.

    k-NN baselines use each node's own k nearest neighbours; other graphs use their adjacency.
    """
    n = dataset.n
    if baseline.kind in _KNN_KINDS and baseline.params.k is not None:
        k = baseline.params.k
        table = neighbor_table(dataset, k, neighbors)
        return table.distances[:, :k], np.full(n, k, dtype=np.int64)

    counts = baseline.neighbor_counts()
    if counts.size and counts.min() == 0:
        raise IsolatedNodeError(int(np.argmin(counts)))
    a = baseline.adjacency
    rows = np.repeat(np.arange(n), counts)
    dist = np.sqrt(np.sum((dataset.points[rows] - dataset.points[a.indices]) ** 2, axis=1))
    padded = np.full((n, int(counts.max())), np.inf)
    slots = np.arange(a.nnz) - np.repeat(a.indptr[:-1], counts)
    padded[rows, slots] = dist
    return np.sort(padded, axis=1), counts


def weighted_window(m: int) -> Tuple[int, int, int]:
    """
    (l, first, last) of the weighted-eta window for m neighbours, 1-based and clamped to 1..m.

    Examples:
        >>> weighted_window(10)
        (5, 3, 7)
    """
    l = max(1, m // 2)
    first = max(1, l - (l - 1) // 2)
    last = min(m, l + l // 2)
    return l, first, last


def compute_eta(
    dataset: Dataset,
    baseline: Graph,
    weighted: bool = False,
    d: Optional[int] = None,
    neighbors: Optional[NeighborTable] = None,
) -> np.ndarray:
    """
    Density surrogate eta for every node.

    Unweighted: mean distance to the node's baseline neighbours. Weighted: with m
    neighbours and l = floor(m/2), (1/l) * sum over i in the window around l of
    (l/i)^(1/d) times the i-th neighbour distance.

    Args:
        dataset: Points the baseline was built on
        baseline: Baseline graph
        weighted: Use the weighted order-statistic form
        d: Dimension in the weight exponent; defaults to the data dimension
        neighbors: Neighbour table to reuse

    Raises:
        IsolatedNodeError: If a node has no neighbours

    Examples:
        >>> ds = Dataset(points=[0.0, 1.0, 3.0])
        >>> compute_eta(ds, build_baseline(ds, 1)).tolist()
        [1.0, 1.0, 2.0]
    """
    if baseline.n != dataset.n:
        raise ParamError(f"baseline has {baseline.n} nodes, dataset {dataset.n}")
    distances, counts = _neighbor_distances(dataset, baseline, neighbors)

    if not weighted:
        finite = np.where(np.isfinite(distances), distances, 0.0)
        return finite.sum(axis=1) / counts

    d = d or dataset.d
    eta = np.empty(dataset.n)
    for m in np.unique(counts):
        l, first, last = weighted_window(int(m))
        i = np.arange(first, last + 1)
        coeffs = (l / i) ** (1.0 / d)
        members = counts == m
        eta[members] = distances[members][:, first - 1 : last] @ coeffs / l
    return eta


def compute_rank(eta: np.ndarray) -> RankVector:
    """
    Empirical rank R(v) = |{w : eta(v) <= eta(w)}| / n, counting v itself.

    Tied values share the higher rank.

    Examples:
        >>> compute_rank(np.array([1.0, 1.0, 2.0])).rank.tolist()
        [1.0, 1.0, 0.3333333333333333]
    """
    eta = np.asarray(eta, dtype=np.float64)
    n = eta.size
    at_least = n - np.searchsorted(np.sort(eta), eta, side="left")
    return RankVector(eta=eta, rank=at_least / n)


def compute_ranks(
    dataset: Dataset,
    k0: Optional[int] = None,
    weighted: bool = False,
    neighbors: Optional[NeighborTable] = None,
) -> Tuple[RankVector, Graph]:
    """
    Build the baseline k0-NN graph and rank every node on it.

    Args:
        dataset: Points to rank
        k0: Baseline neighbour count; defaults to ceil(sqrt(n))
        weighted: Use the weighted eta statistic
        neighbors: Neighbour table to reuse

    Returns:
        (ranks, baseline graph)
    """
    k0 = k0 or default_k0(dataset.n)
    table = neighbor_table(dataset, k0, neighbors)
    baseline = build_baseline(dataset, k0, neighbors=table)
    rank = compute_rank(compute_eta(dataset, baseline, weighted=weighted, neighbors=table))
    return rank, baseline


def default_k0(n: int) -> int:
    """ceil(sqrt(n)), capped at n - 1."""
    return max(1, min(math.ceil(math.sqrt(n)), n - 1))


class PValueOracle:
    """
    Monte Carlo estimate of the sublevel mass P(f(X) <= f(y)) for any density spec.

    Densities of ``n_samples`` draws are sorted once; each query is a binary search.

    Examples:
        >>> oracle = PValueOracle(densities.fig2_spec(), seed=0)
        >>> oracle(np.array([[4.5, 0.0]]))
    """

    def __init__(self, spec: DensitySpec, n_samples: int = PVALUE_SAMPLES, seed: int = 0):
        self.spec = spec
        draws, _ = densities.sample(spec, n_samples, make_rng(seed))
        self.sorted_log_density = np.sort(densities.log_pdf(spec, draws))
        logger.debug(f"Built p-value oracle from {n_samples} draws")

    def __call__(self, points: np.ndarray) -> np.ndarray:
        levels = densities.log_pdf(self.spec, points)
        return np.searchsorted(self.sorted_log_density, levels, side="right") / self.sorted_log_density.size


def _gaussian_pvalues(spec, points: np.ndarray) -> np.ndarray:
    mean = np.asarray(spec.means[0])
    var = np.asarray(spec.covariances[0])
    radius2 = np.sum((points - mean) ** 2 / var, axis=1)
    return stats.chi2.sf(radius2, df=spec.dim)


def _mixture_cdf(weights, means, sds, x: float) -> float:
    if x == -np.inf:
        return 0.0
    if x == np.inf:
        return 1.0
    return float(np.sum(weights * stats.norm.cdf(x, loc=means, scale=sds)))


def _line_pvalues(spec, y: np.ndarray, grid_points: int = 4001) -> np.ndarray:
    """Sublevel mass of a 1-D mixture by root bracketing of f(x) = f(y)."""
    weights = np.asarray(spec.weights)
    means = np.asarray(spec.means)[:, 0]
    sds = np.sqrt(np.asarray(spec.covariances)[:, 0])

    def f(x):
        return np.sum(weights * stats.norm.pdf(np.asarray(x)[..., None], loc=means, scale=sds), axis=-1)

    lo = min(float(np.min(means - 12 * sds)), float(y.min()) - 1.0)
    hi = max(float(np.max(means + 12 * sds)), float(y.max()) + 1.0)
    grid = np.linspace(lo, hi, grid_points)
    f_grid = f(grid)

    result = np.empty(y.size)
    for index, point in enumerate(y):
        level = float(f(point))
        g = f_grid - level
        breaks = set(grid[g == 0].tolist())
        breaks.add(float(point))
        for j in np.flatnonzero(g[:-1] * g[1:] < 0):
            try:
                breaks.add(optimize.brentq(lambda x: float(f(x)) - level, grid[j], grid[j + 1], xtol=1e-12))
            except (ValueError, RuntimeError) as e:
                raise NumericalError(f"root bracketing failed near x={grid[j]:.4g}: {e}") from e
        edges = [-np.inf] + sorted(breaks) + [np.inf]
        mass = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            if a == -np.inf:
                mid = b - 1.0
            elif b == np.inf:
                mid = a + 1.0
            else:
                mid = 0.5 * (a + b)
            if f(mid) <= level:
                mass += _mixture_cdf(weights, means, sds, b) - _mixture_cdf(weights, means, sds, a)
        result[index] = min(1.0, max(0.0, mass))
    return result


def pvalues(spec: DensitySpec, points: np.ndarray, oracle: Optional[PValueOracle] = None) -> np.ndarray:
    """
    p(y) = mass of {x : f(x) <= f(y)} for every row of ``points``.

    Single Gaussians use the chi-square tail of the Mahalanobis radius, 1-D
    mixtures root bracketing, uniform boxes their support, and any other mixture
    a Monte Carlo oracle.

    Raises:
        NumericalError: If root bracketing fails
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points.reshape(-1, spec.dim)
    if isinstance(spec, UniformSpec):
        return np.isfinite(densities.log_pdf(spec, points)).astype(np.float64)
    if spec.n_components == 1:
        return _gaussian_pvalues(spec, points)
    if spec.dim == 1:
        return _line_pvalues(spec, points[:, 0])
    oracle = oracle or PValueOracle(spec)
    return oracle(points)


def analytic_pvalue(spec: DensitySpec, y) -> float:
    """
    p-value of a single point y.

    Examples:
        >>> analytic_pvalue(densities.gaussian_1d_spec(), 0.0)
        1.0
        >>> round(analytic_pvalue(densities.gaussian_1d_spec(), 1.96), 3)
        0.05
    """
    point = np.asarray(y, dtype=np.float64).reshape(1, spec.dim)
    return float(pvalues(spec, point)[0])
