"""
Partition-constrained minimum cut selection.

``PCutSelector`` builds the baseline graph and node ranks once, generates one
candidate partition per grid point and selects the feasible candidate with the
smallest cut on the baseline graph.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from scipy.optimize import linear_sum_assignment

from pcut.core.exceptions import DataError, NoFeasiblePartitionError, ParamError
from pcut.core.models import (
    CandidateRecord,
    Dataset,
    GraphKind,
    GraphParams,
    GridPoint,
    LabelMask,
    Mode,
    Objective,
    Partition,
    PCutReport,
    SearchGrid,
    SweepEntry,
    min_size_for,
)
from pcut.core.ranking import compute_eta, compute_rank, default_k0
from pcut.core.settings import PCutSettings, get_settings
from pcut.core.spectral import embed, spectral_cluster
from pcut.core.ssl import SSLProblem, grf_propagate, ssl_error_rate
from pcut.graphs import builder_for
from pcut.graphs.base import Graph
from pcut.graphs.cut import cut_value
from pcut.graphs.dense import ADAPTIVE_NEIGHBOR
from pcut.graphs.knn import build_baseline
from pcut.graphs.neighbors import NeighborTable

BRUTE_FORCE_LIMIT = 14
BRUTE_FORCE_CHUNK = 1 << 16
FLAT_REL_TOL = 1e-6
FLAT_ABS_TOL = 1e-12

Candidate = Tuple[Optional[GridPoint], Optional[GraphParams], Partition]


def check_delta(delta: float, K: int) -> None:
    """
    Raises:
        ParamError: Unless 0 < delta < 1/K
    """
    if not 0.0 < delta < 1.0 / K:
        raise ParamError(f"delta must lie in (0, 1/K) = (0, {1.0 / K:.4g}), got {delta}")


def balanced_reference(baseline: Graph) -> Partition:
    """
    Balanced 2-partition: the first floor(n/2) nodes along the baseline's Fiedler vector.

    Examples:
        >>> balanced_reference(baseline).sizes().tolist()
        [500, 500]
    """
    fiedler = embed(baseline, 2, Objective.RCUT).vectors[:, 1]
    order = np.argsort(fiedler, kind="stable")
    assignment = np.ones(baseline.n, dtype=np.int64)
    assignment[order[: baseline.n // 2]] = 0
    return Partition(assignment=assignment, K=2).canonical()


def diagnostics_qy(
    baseline: Graph, partition: Partition, balanced_ref: Optional[Partition]
) -> Tuple[Optional[float], float]:
    """
    Cut ratio q against the balanced reference and imbalance coefficient y.

    q is None for K > 2 or when the reference cut is zero.

    Examples:
        >>> diagnostics_qy(k4, Partition(assignment=[0, 1, 1, 1], K=2), Partition(assignment=[0, 0, 1, 1], K=2))
        (0.75, 0.25)
    """
    y = partition.min_cluster_size / partition.n
    if partition.K != 2 or balanced_ref is None:
        return None, y
    reference = cut_value(baseline, balanced_ref, kway=False)
    if reference <= 0:
        return None, y
    return cut_value(baseline, partition, kway=False) / reference, y


class PCutSelector:
    """
    Runs PCut on one dataset.

    The baseline graph, the node ranks and the candidate pool are computed once
    and reused by every ``run``, so a delta sweep costs one grid evaluation.

    Attributes:
        dataset: Points to partition
        K: Number of clusters
        grid: Searched (lambda, k, sigma) grid, restricted to k < n
        k0: Baseline neighbour count
        seed: Seed every candidate's k-means stream derives from
        mask: Seed labels (SSL mode)

    Examples:
        >>> selector = PCutSelector(dataset, K=2, seed=7)
        >>> report = selector.run(delta=0.05)
        >>> report.selected_candidate.params.label()
    """

    def __init__(
        self,
        dataset: Dataset,
        K: int = 2,
        grid: Optional[SearchGrid] = None,
        k0: Optional[int] = None,
        seed: Optional[int] = None,
        mask: Optional[LabelMask] = None,
        threads: Optional[int] = None,
        weighted_eta: bool = False,
        baseline_sigma: Optional[float] = None,
        settings: Optional[PCutSettings] = None,
    ):
        self.settings = settings or get_settings()
        if K < 1 or K > dataset.n:
            raise ParamError(f"K must lie in 1..{dataset.n}, got {K}")
        self.dataset = dataset
        self.K = K
        self.grid = (grid or SearchGrid()).restricted(dataset.n)
        self.k0 = k0 or default_k0(dataset.n)
        if not 1 <= self.k0 < dataset.n:
            raise ParamError(f"k0 must lie in 1..{dataset.n - 1}, got {self.k0}")
        self.seed = self.settings.seed if seed is None else seed
        self.threads = threads or self.settings.threads
        self.weighted_eta = weighted_eta
        self.baseline_sigma = baseline_sigma
        self.mask = mask
        if self.grid.mode == Mode.SSL:
            if mask is None:
                raise ParamError("SSL mode needs a label mask")
            mask.check_against(dataset.n, K)

        self._neighbors: Optional[NeighborTable] = None
        self._baseline: Optional[Graph] = None
        self._rank = None
        self._balanced: Optional[Partition] = None
        self._pool: Optional[List[Candidate]] = None

    def _ensure_prepared(self) -> None:
        """Build the neighbour table, baseline graph, ranks and balanced reference on first use."""
        if self._baseline is not None:
            return
        # RMD degrees reach 2k at lambda = 0
        depth = max([self.k0, ADAPTIVE_NEIGHBOR] + [2 * k for k in self.grid.ks])
        self._neighbors = NeighborTable(self.dataset.points, min(depth, self.dataset.n - 1))
        self._baseline = build_baseline(self.dataset, self.k0, sigma=self.baseline_sigma, neighbors=self._neighbors)
        eta = compute_eta(self.dataset, self._baseline, weighted=self.weighted_eta, neighbors=self._neighbors)
        self._rank = compute_rank(eta)
        self._balanced = balanced_reference(self._baseline) if self.K == 2 else None
        logger.debug(f"Baseline {self._baseline.params.label()} with {self._baseline.n_edges} edges")

    @property
    def baseline(self) -> Graph:
        self._ensure_prepared()
        return self._baseline

    @property
    def rank(self):
        self._ensure_prepared()
        return self._rank

    @property
    def balanced(self) -> Optional[Partition]:
        self._ensure_prepared()
        return self._balanced

    def resolve(self, point: GridPoint) -> GraphParams:
        """
        Turn a grid point into concrete graph parameters.

        sigma = multiplier * d~_k (None keeps binary weights); epsilon graphs use
        epsilon = d~_k; full RBF graphs without a multiplier use sigma = d~_k.
        """
        self._ensure_prepared()
        if point.kind == GraphKind.FULL_ARBF:
            return GraphParams(kind=point.kind)
        scale = self._neighbors.mean_kth_distance(point.k)
        sigma = None
        if point.sigma_multiplier is not None and scale > 0:
            sigma = point.sigma_multiplier * scale
        if point.kind == GraphKind.FULL_RBF and sigma is None:
            sigma = scale if scale > 0 else 1.0
        if point.kind == GraphKind.EPSILON:
            return GraphParams(kind=point.kind, k=point.k, sigma=sigma, epsilon=scale if scale > 0 else 1e-12)
        return GraphParams(kind=point.kind, lam=point.lam, k=point.k, sigma=sigma)

    def _candidate_seed(self, index: int) -> int:
        return int(np.random.SeedSequence([self.seed, index]).generate_state(1)[0])

    def partition_for(self, params: GraphParams, index: int = 0) -> Partition:
        """Build the graph for ``params`` and generate its candidate partition."""
        self._ensure_prepared()
        graph = builder_for(params.kind).build(self.dataset, params, rank=self._rank, neighbors=self._neighbors)
        if self.grid.mode == Mode.SSL:
            return grf_propagate(SSLProblem(graph=graph, mask=self.mask, K=self.K))
        return spectral_cluster(
            graph,
            self.K,
            self.grid.objective,
            seed=self._candidate_seed(index),
            settings=self.settings,
        )

    def _generate(self, item: Tuple[int, GridPoint]) -> Candidate:
        index, point = item
        params = self.resolve(point)
        partition = self.partition_for(params, index)
        logger.debug(f"Candidate {index}: {params.label()} -> sizes {partition.sizes().tolist()}")
        return point, params, partition

    def candidates(self) -> List[Candidate]:
        """
        Candidate pool in grid order, computed once.

        Grid points run on a thread pool; ``map`` keeps results in grid order.
        """
        if self._pool is None:
            self._ensure_prepared()
            points = list(enumerate(self.grid.points()))
            logger.info(f"Generating {len(points)} candidate partitions ({self.grid.mode.value} mode)")
            with ThreadPoolExecutor(max_workers=self.threads) as executor:
                self._pool = list(executor.map(self._generate, points))
        return self._pool

    def record(self, candidate: Candidate, min_size: int, forced: bool = False) -> CandidateRecord:
        point, params, partition = candidate
        if partition.n != self.dataset.n or partition.K != self.K:
            raise ParamError(f"candidate must be a {self.K}-partition of {self.dataset.n} nodes")
        q, y = diagnostics_qy(self.baseline, partition, self.balanced)
        return CandidateRecord(
            params=params,
            sigma_multiplier=None if point is None else point.sigma_multiplier,
            partition=partition,
            cut0=cut_value(self.baseline, partition, kway=True),
            min_cluster_size=partition.min_cluster_size,
            feasible=partition.min_cluster_size >= min_size,
            q=q,
            y=y,
            forced=forced,
        )

    def evaluate(self, delta: float, forced: Optional[Sequence[Partition]] = None) -> PCutReport:
        """
        Score the candidate pool (plus ``forced`` partitions) for one delta without raising
        when nothing is feasible.
        """
        check_delta(delta, self.K)
        n = self.dataset.n
        min_size = min_size_for(delta, n)
        records = [self.record(c, min_size) for c in self.candidates()]
        records.extend(self.record((None, p.provenance, p), min_size, forced=True) for p in forced or [])

        selected = None
        for index, record in enumerate(records):
            if record.feasible and (selected is None or record.cut0 < records[selected].cut0):
                selected = index

        ssl_error = None
        if self.grid.mode == Mode.SSL and selected is not None and self.dataset.true_labels is not None:
            ssl_error = ssl_error_rate(records[selected].partition, self.dataset, self.mask)

        return PCutReport(
            candidates=records,
            selected=selected,
            delta=delta,
            min_size=min_size,
            n=n,
            K=self.K,
            mode=self.grid.mode,
            objective=self.grid.objective,
            baseline_params=self.baseline.params,
            ssl_error=ssl_error,
        )

    def run(self, delta: Optional[float] = None, forced: Optional[Sequence[Partition]] = None) -> PCutReport:
        """
        Select the feasible candidate with minimal baseline cut.

        Raises:
            ParamError: Unless 0 < delta < 1/K
            NoFeasiblePartitionError: If no candidate reaches ceil(delta * n) nodes in
                every cluster; the report is attached
        """
        delta = self.settings.delta if delta is None else delta
        report = self.evaluate(delta, forced)
        if report.selected is None:
            raise NoFeasiblePartitionError(
                f"no candidate has every cluster of size >= {report.min_size} (delta={delta})",
                report=report,
                delta=delta,
            )
        chosen = report.selected_candidate
        logger.info(
            f"Selected candidate {report.selected} of {len(report.candidates)}: cut0={chosen.cut0:.6g}, "
            f"min cluster {chosen.min_cluster_size}"
        )
        return report

    def sweep(self, deltas: Iterable[float]) -> List[SweepEntry]:
        """One selection per delta over the same candidate pool, deltas in descending order."""
        entries = []
        for delta in sorted(deltas, reverse=True):
            report = self.evaluate(delta)
            chosen = report.selected_candidate
            entries.append(
                SweepEntry(
                    delta=delta,
                    cut0=None if chosen is None else chosen.cut0,
                    partition=None if chosen is None else chosen.partition,
                    params=None if chosen is None else chosen.params,
                )
            )
        return entries


def run_pcut(
    dataset: Dataset,
    grid: Optional[SearchGrid] = None,
    K: int = 2,
    delta: Optional[float] = None,
    k0: Optional[int] = None,
    seed: Optional[int] = None,
    mask: Optional[LabelMask] = None,
    forced: Optional[Sequence[Partition]] = None,
    **kwargs,
) -> PCutReport:
    """
    Run PCut once.

    Args:
        dataset: Points to partition
        grid: Search grid; defaults to the standard grid
        K: Number of clusters
        delta: Minimum cluster-size fraction, 0 < delta < 1/K
        k0: Baseline neighbour count; defaults to ceil(sqrt(n))
        seed: Seed of every random stream
        mask: Seed labels for SSL mode
        forced: Extra partitions appended to the candidate pool
        **kwargs: Further ``PCutSelector`` options (threads, weighted_eta, baseline_sigma, settings)

    Raises:
        NoFeasiblePartitionError: If no candidate is feasible (report attached)

    Examples:
        >>> report = run_pcut(sample_gaussian_mixture(fig2_spec(), 1000, seed=7), K=2, delta=0.05)
        >>> report.selected_partition.sizes()
    """
    selector = PCutSelector(dataset, K=K, grid=grid, k0=k0, seed=seed, mask=mask, **kwargs)
    return selector.run(delta, forced=forced)


def delta_sweep(
    dataset: Dataset,
    grid: Optional[SearchGrid] = None,
    K: int = 2,
    deltas: Sequence[float] = (0.3, 0.25, 0.2, 0.15, 0.1, 0.05),
    k0: Optional[int] = None,
    seed: Optional[int] = None,
    **kwargs,
) -> List[SweepEntry]:
    """
    Select one partition per delta, reusing a single candidate pool.

    Entries whose delta leaves no feasible candidate have ``cut0`` None.
    """
    selector = PCutSelector(dataset, K=K, grid=grid, k0=k0, seed=seed, **kwargs)
    return selector.sweep(deltas)


def flat_spot_detect(
    sweep: Sequence[Union[SweepEntry, Tuple[float, Optional[float]]]],
) -> List[Tuple[float, float]]:
    """
    Maximal runs (length >= 2) of consecutive deltas with equal selected cut0.

    Entries without a selection are skipped; values are equal within relative
    tolerance 1e-6 of the run's first value.

    Returns:
        (first delta, last delta) of every run

    Examples:
        >>> flat_spot_detect([(0.3, 5), (0.25, 3), (0.2, 3), (0.15, 3), (0.1, 1), (0.05, 1)])
        [(0.25, 0.15), (0.1, 0.05)]
    """
    pairs = []
    for entry in sweep:
        delta, cut0 = (entry.delta, entry.cut0) if isinstance(entry, SweepEntry) else entry
        if cut0 is not None:
            pairs.append((delta, cut0))

    spots = []
    start = 0
    while start < len(pairs):
        end = start
        while end + 1 < len(pairs) and math.isclose(
            pairs[end + 1][1], pairs[start][1], rel_tol=FLAT_REL_TOL, abs_tol=FLAT_ABS_TOL
        ):
            end += 1
        if end > start:
            spots.append((pairs[start][0], pairs[end][0]))
        start = end + 1
    return spots


def brute_force_pcut(graph: Graph, K: int, delta: float) -> Tuple[Optional[Partition], float]:
    """
    Exact size-constrained minimum K-way cut by enumerating all K^n labelings.

    Among labelings with equal cut the one with the largest smallest cluster wins.

    Returns:
        (canonical optimal partition, its K-way cut), or (None, inf) when no labeling
        gives every cluster ceil(delta * n) nodes

    Raises:
        ParamError: If n exceeds 14

    Examples:
        >>> partition, cut0 = brute_force_pcut(path4, 2, 0.25)
        >>> partition.assignment.tolist(), cut0
        ([0, 0, 1, 1], 2.0)
    """
    n = graph.n
    if n > BRUTE_FORCE_LIMIT:
        raise ParamError(f"brute force is limited to n <= {BRUTE_FORCE_LIMIT}, got {n}")
    min_size = min_size_for(delta, n)
    u, v, w = graph.edges()
    powers = K ** np.arange(n, dtype=np.int64)
    clusters = np.arange(K)

    best_code, best_cut, best_smallest = None, math.inf, -1
    total = K**n
    for start in range(0, total, BRUTE_FORCE_CHUNK):
        codes = np.arange(start, min(start + BRUTE_FORCE_CHUNK, total), dtype=np.int64)
        labels = (codes[:, None] // powers[None, :]) % K
        smallest = (labels[:, :, None] == clusters).sum(axis=1).min(axis=1)
        feasible = smallest >= min_size
        if not feasible.any():
            continue
        cuts = 2.0 * ((labels[:, u] != labels[:, v]) @ w)
        cuts[~feasible] = math.inf
        low = cuts.min()
        # equal cuts: the more balanced labeling wins, then the lower code
        tied = np.flatnonzero(cuts <= low + FLAT_ABS_TOL * max(1.0, abs(low)))
        i = int(tied[np.argmax(smallest[tied])])
        cut, size = float(cuts[i]), int(smallest[i])
        if cut < best_cut - FLAT_ABS_TOL * max(1.0, abs(cut)) or (
            abs(cut - best_cut) <= FLAT_ABS_TOL * max(1.0, abs(cut)) and size > best_smallest
        ):
            best_code, best_cut, best_smallest = int(codes[i]), cut, size

    if best_code is None:
        return None, math.inf
    assignment = (best_code // powers) % K
    return Partition(assignment=assignment, K=K, provenance=graph.params).canonical(), best_cut


def clustering_error_rate(partition: Partition, dataset: Dataset) -> float:
    """
    Smallest fraction of misassigned nodes over all cluster-to-class matchings.

    The best matching is found by Hungarian assignment on the confusion matrix.

    Raises:
        DataError: If the dataset has no true labels or a different class count

    Examples:
        >>> clustering_error_rate(Partition(assignment=[1, 1, 0, 0], K=2), Dataset(points=..., true_labels=[0, 0, 1, 1]))
        0.0
    """
    if dataset.true_labels is None:
        raise DataError("clustering error rate needs true labels")
    if partition.n != dataset.n:
        raise DataError(f"partition covers {partition.n} nodes, dataset has {dataset.n}")
    K = partition.K
    if dataset.n_classes != K:
        raise DataError(f"partition has {K} clusters, ground truth has {dataset.n_classes} classes")
    confusion = np.zeros((K, K), dtype=np.int64)
    np.add.at(confusion, (partition.assignment, dataset.true_labels), 1)
    rows, cols = linear_sum_assignment(confusion, maximize=True)
    return 1.0 - confusion[rows, cols].sum() / dataset.n


def selected_boundary(dataset: Dataset, partition: Partition, axis: int = 0) -> float:
    """
    Threshold along ``axis`` that best separates the two clusters.

    The clusters are ordered by their median coordinate; the returned value is the
    midpoint between consecutive sorted coordinates where the fewest nodes fall on
    the wrong side.

    Raises:
        ParamError: If the partition is not a 2-partition or the axis is out of range
    """
    if partition.K != 2:
        raise ParamError("a boundary is defined for 2-partitions only")
    if not 0 <= axis < dataset.d:
        raise ParamError(f"axis {axis} outside 0..{dataset.d - 1}")
    coords = dataset.points[:, axis]
    labels = partition.assignment
    medians = [np.median(coords[labels == c]) if np.any(labels == c) else np.inf for c in (0, 1)]
    high = labels == (1 if medians[0] <= medians[1] else 0)

    order = np.argsort(coords, kind="stable")
    xs, is_high = coords[order], high[order]
    wrong_left = np.cumsum(is_high)[:-1]
    wrong_right = (~is_high).sum() - np.cumsum(~is_high)[:-1]
    i = int(np.argmin(wrong_left + wrong_right))
    return float(0.5 * (xs[i] + xs[i + 1]))
