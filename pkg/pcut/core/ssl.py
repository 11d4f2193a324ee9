"""
Semi-supervised partitions by Gaussian random fields (harmonic label propagation).
"""

from typing import Optional

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import sparse
from scipy.sparse.linalg import norm as sparse_norm
from scipy.sparse.linalg import splu

from pcut.core.exceptions import DataError, NumericalError, ShapeError
from pcut.core.models import Dataset, LabelMask, Partition
from pcut.graphs.base import Graph

RESIDUAL_TOL = 1e-10
TIE_TOL = 1e-12


class SSLProblem(BaseModel):
    """
    A graph, its seed labels and the number of classes.

    Attributes:
        graph: Graph labels propagate over
        mask: Seed labels, at least one per class
        K: Number of classes
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    graph: Graph
    mask: LabelMask
    K: int = Field(..., ge=1)

    @model_validator(mode="after")
    def check_mask(self) -> "SSLProblem":
        self.mask.check_against(self.graph.n, self.K)
        return self


def seed_prior(mask: LabelMask, K: int) -> int:
    """Most frequent seed class, ties to the lower class."""
    _, classes = mask.arrays()
    return int(np.argmax(np.bincount(classes, minlength=K)))


def harmonic_scores(problem: SSLProblem) -> np.ndarray:
    """
    Harmonic class scores F (n x K).

    Seeds keep their one-hot rows; unlabeled nodes in a component with a seed
    solve L_uu F_u = W_ul Y_l; nodes in components without any seed get the
    one-hot row of the most frequent seed class.

    Raises:
        NumericalError: If L_uu is singular or the solve misses the residual tolerance
    """
    graph, K = problem.graph, problem.K
    n = graph.n
    ids, classes = problem.mask.arrays()
    scores = np.zeros((n, K))
    scores[ids, classes] = 1.0

    _, component = graph.components()
    seeded = np.zeros(n, dtype=bool)
    seeded[np.isin(component, component[ids])] = True
    labeled = np.zeros(n, dtype=bool)
    labeled[ids] = True

    orphans = np.flatnonzero(~seeded)
    if orphans.size:
        prior = seed_prior(problem.mask, K)
        logger.warning(f"{orphans.size} nodes lie in components without seeds; assigning class {prior}")
        scores[orphans, prior] = 1.0

    free = np.flatnonzero(seeded & ~labeled)
    if free.size == 0:
        return scores

    w = graph.adjacency
    degrees = graph.degrees()
    l_uu = (sparse.diags(degrees[free]) - w[free][:, free]).tocsc()
    rhs = np.asarray(w[free][:, ids] @ scores[ids])
    try:
        solution = splu(l_uu).solve(rhs)
    except RuntimeError as e:
        raise NumericalError(f"unlabeled Laplacian block is singular: {e}") from e

    residual = np.abs(l_uu @ solution - rhs).max()
    bound = RESIDUAL_TOL * (sparse_norm(l_uu, np.inf) * np.abs(solution).max() + np.abs(rhs).max())
    if not np.all(np.isfinite(solution)) or residual > bound:
        raise NumericalError(f"harmonic solve residual {residual:.3g} exceeds {bound:.3g}")
    scores[free] = solution
    return scores


def grf_propagate(problem: SSLProblem) -> Partition:
    """
    Classify every node by the argmax of its harmonic scores.

    Ties within 1e-12 go to the lower class; seeds keep their labels.

    Examples:
        >>> problem = SSLProblem(graph=path3, mask=LabelMask(labels={0: 0, 2: 1}), K=2)
        >>> grf_propagate(problem).assignment.tolist()
        [0, 0, 1]
    """
    scores = harmonic_scores(problem)
    best = scores.max(axis=1, keepdims=True)
    assignment = np.argmax(scores >= best - TIE_TOL, axis=1)
    return Partition(assignment=assignment, K=problem.K, provenance=problem.graph.params)


def ssl_error_rate(partition: Partition, dataset: Dataset, mask: LabelMask) -> Optional[float]:
    """
    Fraction of unlabeled nodes whose predicted class differs from the true label.

    Returns None when every node is a seed.

    Raises:
        DataError: If the dataset has no true labels
        ShapeError: If the partition and dataset sizes differ
    """
    if dataset.true_labels is None:
        raise DataError("SSL error rate needs true labels")
    if partition.n != dataset.n:
        raise ShapeError(f"partition covers {partition.n} nodes, dataset has {dataset.n}")
    unlabeled = np.ones(dataset.n, dtype=bool)
    unlabeled[list(mask.labeled_ids)] = False
    if not unlabeled.any():
        return None
    wrong = partition.assignment[unlabeled] != dataset.true_labels[unlabeled]
    return float(wrong.mean())
