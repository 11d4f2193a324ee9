# pcut/utils/shortcuts.py
"""
Convenience functions for common pcut operations.

Each shortcut takes a plain point array and returns plain numpy results, so
one call covers the usual clustering, SSL and ranking workflows.
"""

from typing import Any, Dict, Optional

import numpy as np

from pcut.core.models import Dataset, LabelMask, Mode, SearchGrid


def _as_dataset(points: Any) -> Dataset:
    return points if isinstance(points, Dataset) else Dataset(points=points)


def cluster_points(
    points: Any,
    K: int = 2,
    delta: Optional[float] = None,
    seed: Optional[int] = None,
    **grid_overrides: Any,
) -> np.ndarray:
    """
    Cluster points with PCut and return the selected assignment.

    Args:
        points: n x d array (or a Dataset)
        K: Number of clusters
        delta: Minimum cluster-size fraction; defaults to the configured delta
        seed: Seed of every random stream
        **grid_overrides: ``SearchGrid`` fields such as ``lambdas`` or ``ks``

    Returns:
        Cluster index per point

    Raises:
        NoFeasiblePartitionError: If no candidate meets the size constraint

    Examples:
        >>> labels = cluster_points(X, K=2, delta=0.05, ks=[10, 20])
    """
    from pcut.core.selector import run_pcut

    dataset = _as_dataset(points)
    report = run_pcut(dataset, SearchGrid(**grid_overrides), K=K, delta=delta, seed=seed)
    return report.selected_partition.assignment


def ssl_points(
    points: Any,
    labels: Dict[int, int],
    K: Optional[int] = None,
    delta: Optional[float] = None,
    seed: Optional[int] = None,
    **grid_overrides: Any,
) -> np.ndarray:
    """
    Propagate seed labels with PCut-selected graphs and return the predicted class per point.

    Args:
        points: n x d array (or a Dataset)
        labels: Map from node id to class index
        K: Number of classes; defaults to max seed class + 1

    Examples:
        >>> predicted = ssl_points(X, {0: 0, 57: 1})
    """
    from pcut.core.selector import run_pcut

    dataset = _as_dataset(points)
    mask = LabelMask(labels=labels)
    K = K or max(mask.labels.values()) + 1
    grid = SearchGrid(mode=Mode.SSL, **grid_overrides)
    report = run_pcut(dataset, grid, K=K, delta=delta, seed=seed, mask=mask)
    return report.selected_partition.assignment


def rank_points(points: Any, k0: Optional[int] = None, weighted: bool = False) -> np.ndarray:
    """
    Density rank of every point on the baseline k0-NN graph.

    Examples:
        >>> rank_points(np.array([[0.0], [1.0], [3.0]]), k0=1).tolist()
        [1.0, 1.0, 0.3333333333333333]
    """
    from pcut.core.ranking import compute_ranks

    rank, _ = compute_ranks(_as_dataset(points), k0=k0, weighted=weighted)
    return np.asarray(rank.rank)
