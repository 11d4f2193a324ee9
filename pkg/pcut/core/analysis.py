"""
Hyperplane cuts and numerical checks of the limit behaviour of ranks and RMD cuts.
"""

import math
import warnings
from typing import List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy import integrate
from scipy.special import gamma

from pcut.core.exceptions import NumericalError, ParamError
from pcut.core.models import (
    CutObjective,
    Dataset,
    DensitySpec,
    GraphKind,
    GraphParams,
    HyperplaneCut,
    LimitCheckResult,
    Objective,
    Partition,
    UniformSpec,
)
from pcut.core.ranking import PValueOracle, compute_ranks, pvalues
from pcut.core.spectral import rcut_ncut_value
from pcut.data import densities
from pcut.data.generators import sample_density
from pcut.graphs.base import Graph
from pcut.graphs.cut import cut_value
from pcut.graphs.knn import build_rmd

QUAD_ABS_TOL = 1e-8


def hyperplane_partition(dataset: Dataset, cut: HyperplaneCut) -> Partition:
    """
    Split nodes by the hyperplane: cluster 0 is {x : x[axis] <= threshold}, cluster 1 the rest.

    Empty sides are allowed and logged.

    Raises:
        ParamError: If the axis is not below the data dimension
    """
    if cut.axis >= dataset.d:
        raise ParamError(f"axis {cut.axis} outside 0..{dataset.d - 1}")
    assignment = (dataset.points[:, cut.axis] > cut.threshold).astype(np.int64)
    partition = Partition(assignment=assignment, K=2)
    if partition.min_cluster_size == 0:
        logger.debug(f"Hyperplane x[{cut.axis}] <= {cut.threshold:.4g} leaves one side empty")
    return partition


def cut_curve(
    dataset: Dataset,
    graph: Graph,
    axis: int,
    thresholds: Sequence[float],
    objective: CutObjective = CutObjective.RCUT,
) -> List[Tuple[float, Optional[float]]]:
    """
    Objective value of the hyperplane cut at every threshold.

    Thresholds leaving a side empty (or an infinite objective) give None.

    Examples:
        >>> cut_curve(ds, graph, 0, np.linspace(-3, 8, 111), CutObjective.RCUT)
    """
    objective = CutObjective(objective)
    curve = []
    for t in thresholds:
        partition = hyperplane_partition(dataset, HyperplaneCut(axis=axis, threshold=float(t)))
        if partition.min_cluster_size == 0:
            curve.append((float(t), None))
            continue
        if objective == CutObjective.CUT:
            value = cut_value(graph, partition, kway=False)
        else:
            value = rcut_ncut_value(graph, partition, Objective(objective.value))
        curve.append((float(t), None if math.isinf(value) else value))
    return curve


def rho(p, lam: float):
    """Degree modulation factor lambda + 2 (1 - lambda) p."""
    return lam + 2.0 * (1.0 - lam) * np.asarray(p, dtype=np.float64)


def unit_ball_volume(d: int) -> float:
    """Volume of the unit ball in R^d (1 for d = 0)."""
    return math.pi ** (d / 2.0) / gamma(d / 2.0 + 1.0)


def limit_constant(d: int) -> float:
    """C_d = 2 eta_{d-1} / ((d + 1) eta_d^(1 + 1/d)) with eta_d the unit ball volume."""
    return 2.0 * unit_ball_volume(d - 1) / ((d + 1) * unit_ball_volume(d) ** (1.0 + 1.0 / d))


def predicted_limit(
    spec: DensitySpec,
    cut: HyperplaneCut,
    lam: float,
    d: Optional[int] = None,
    oracle: Optional[PValueOracle] = None,
) -> float:
    """
    Limit of the scaled RCut of a hyperplane on RMD graphs.

    C_d * B_S * integral over S of f^(1 - 1/d) rho(p)^(1 + 1/d), with
    B_S = 1/mu(C+) + 1/mu(C-). In one dimension S is a point; in two the
    integral runs along the line x[axis] = threshold.

    Args:
        spec: Density of the data
        cut: The hyperplane S
        lam: Degree modulation lambda
        d: Dimension; defaults to the spec's
        oracle: p-value oracle to reuse for mixtures without a closed form

    Raises:
        ParamError: If d > 2, or the cut leaves no mass on one side
        NumericalError: If the quadrature fails

    Examples:
        >>> predicted_limit(densities.uniform_1d_spec(), HyperplaneCut(axis=0, threshold=0.5), 1.0)
        1.0
    """
    d = d or spec.dim
    if d > 2:
        raise ParamError(f"predicted limits are evaluated for d <= 2, got d={d}")
    if cut.axis >= spec.dim:
        raise ParamError(f"axis {cut.axis} outside 0..{spec.dim - 1}")
    below = densities.marginal_cdf(spec, cut.axis, cut.threshold)
    above = 1.0 - below
    if below <= 0.0 or above <= 0.0:
        raise ParamError(f"hyperplane at {cut.threshold} leaves no probability mass on one side")
    b_s = 1.0 / below + 1.0 / above

    if d == 1:
        point = np.array([[cut.threshold]])
        density = float(densities.pdf(spec, point)[0])
        p = float(pvalues(spec, point, oracle)[0])
        integral = (density ** (1.0 - 1.0 / d) if density > 0 else 0.0) * float(rho(p, lam)) ** (1.0 + 1.0 / d)
        return limit_constant(d) * b_s * integral

    other = 1 - cut.axis
    if not isinstance(spec, UniformSpec) and spec.n_components > 1:
        oracle = oracle or PValueOracle(spec)

    def integrand(s: float) -> float:
        point = np.empty((1, 2))
        point[0, cut.axis] = cut.threshold
        point[0, other] = s
        density = float(densities.pdf(spec, point)[0])
        if density <= 0:
            return 0.0
        p = float(pvalues(spec, point, oracle)[0])
        return density ** (1.0 - 1.0 / d) * float(rho(p, lam)) ** (1.0 + 1.0 / d)

    if isinstance(spec, UniformSpec):
        lo, hi = spec.low[other], spec.high[other]
    else:
        lo, hi = -np.inf, np.inf
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            integral, _ = integrate.quad(integrand, lo, hi, epsabs=QUAD_ABS_TOL, limit=200)
        except integrate.IntegrationWarning as e:
            raise NumericalError(f"quadrature along the hyperplane failed: {e}") from e
    return limit_constant(d) * b_s * integral


def _derived_seed(seed: int, *keys: int) -> int:
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1)[0])


def rank_schedule(n: int, exponent: float = 0.5) -> int:
    """
    Baseline neighbour count k0 = ceil(n^exponent), capped at n - 1.

    The default exponent gives ceil(sqrt(n)). Larger exponents below 1 keep k0/n -> 0
    and lower the variance of eta.

    Examples:
        >>> rank_schedule(2000), rank_schedule(2000, 0.8)
        (45, 438)
    """
    if not 0.0 < exponent < 1.0:
        raise ParamError(f"k0 exponent must lie in (0, 1), got {exponent}")
    return max(1, min(math.ceil(n**exponent), n - 1))


def verify_thm1(
    spec: DensitySpec,
    n_values: Sequence[int],
    seed: int,
    repeats: int = 1,
    weighted: bool = False,
    k0_exponent: float = 0.5,
) -> List[Tuple[int, float]]:
    """
    Mean |R(x_i) - p(x_i)| per sample size, averaged over ``repeats`` draws.

    Ranks use the baseline graph with k0 = ceil(n^k0_exponent), ceil(sqrt(n)) by default.

    Examples:
        >>> verify_thm1(densities.gaussian_1d_spec(), [500, 1000, 2000], seed=1)
    """
    oracle = None
    if not isinstance(spec, UniformSpec) and spec.n_components > 1 and spec.dim > 1:
        oracle = PValueOracle(spec, seed=seed)
    results = []
    for n in n_values:
        k0 = rank_schedule(n, k0_exponent)
        errors = []
        for r in range(repeats):
            dataset = sample_density(spec, n, _derived_seed(seed, n, r))
            rank, _ = compute_ranks(dataset, k0=k0, weighted=weighted)
            errors.append(float(np.mean(np.abs(rank.rank - pvalues(spec, dataset.points, oracle)))))
        results.append((int(n), float(np.mean(errors))))
        logger.debug(f"Rank consistency n={n}, k0={k0}: mean |R - p| = {results[-1][1]:.4f}")
    return results


def neighbor_schedule(n: int, d: int) -> int:
    """k_n = ceil(n^0.7) in one dimension, ceil(n^(2/3)) otherwise, capped at n - 1."""
    exponent = 0.7 if d == 1 else 2.0 / 3.0
    return max(1, min(math.ceil(n**exponent), n - 1))


def scaled_rcut(dataset: Dataset, graph: Graph, cut: HyperplaneCut, k: int) -> float:
    """
    (1/k) (n/k)^(1/d) Cut(S) (1/|C+| + 1/|C-|) for the hyperplane partition.

    Cut(S) sums over ordered pairs, so every crossing edge counts in both directions.
    """
    partition = hyperplane_partition(dataset, cut)
    sizes = partition.sizes()
    if sizes.min() == 0:
        return math.inf
    n, d = dataset.n, dataset.d
    crossing = cut_value(graph, partition, kway=True)
    return (1.0 / k) * (n / k) ** (1.0 / d) * crossing * float(np.sum(1.0 / sizes))


def verify_thm2(
    spec: DensitySpec,
    cut: HyperplaneCut,
    lam: float,
    n_values: Sequence[int],
    seed: int,
    repeats: int = 1,
) -> LimitCheckResult:
    """
    Empirical scaled RCut of a hyperplane on unweighted RMD graphs against its predicted limit.

    Each sample size uses k_n from ``neighbor_schedule`` and ranks from the
    ceil(sqrt(n)) baseline graph.

    Examples:
        >>> result = verify_thm2(densities.uniform_1d_spec(), HyperplaneCut(axis=0, threshold=0.5), 1.0, [1000, 4000], 3)
        >>> result.relative_errors
    """
    predicted = predicted_limit(spec, cut, lam)
    empirical = []
    for n in n_values:
        values = []
        for r in range(repeats):
            dataset = sample_density(spec, n, _derived_seed(seed, n, r))
            k = neighbor_schedule(n, dataset.d)
            rank, _ = compute_ranks(dataset)
            graph = build_rmd(dataset, rank, GraphParams(kind=GraphKind.RMD, lam=lam, k=k))
            values.append(scaled_rcut(dataset, graph, cut, k))
        empirical.append(float(np.mean(values)))
        logger.debug(f"Scaled RCut n={n}, lambda={lam}: {empirical[-1]:.4f} (predicted {predicted:.4f})")
    return LimitCheckResult(
        n_values=[int(n) for n in n_values],
        empirical=empirical,
        predicted=predicted,
        relative_errors=[abs(e - predicted) / predicted for e in empirical],
    )
