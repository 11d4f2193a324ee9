"""
Pydantic models for pcut.

This module defines the data models shared by the graph builders, the spectral
and SSL engines and the PCut selector, with the invariants each of them relies on.
"""

import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from pcut.core.exceptions import DataError, SpecError, TooFewPointsError


def _readonly(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


class GraphKind(str, Enum):
    """Supported graph constructions."""

    BASELINE_KNN = "baseline_knn"
    RMD = "rmd"
    KNN = "knn"
    EPSILON = "epsilon"
    FULL_RBF = "full_rbf"
    FULL_ARBF = "full_arbf"


class Objective(str, Enum):
    """Spectral relaxation objectives."""

    RCUT = "rcut"
    NCUT = "ncut"


class CutObjective(str, Enum):
    """Objectives a hyperplane cut curve can be evaluated with."""

    CUT = "cut"
    RCUT = "rcut"
    NCUT = "ncut"


class Mode(str, Enum):
    """How candidate partitions are generated."""

    CLUSTERING = "clustering"
    SSL = "ssl"


class Dataset(BaseModel):
    """
    A set of n points in R^d, the node set every graph is built on.

    Attributes:
        points: n x d array of coordinates
        true_labels: Optional ground-truth cluster index per point

    Examples:
        >>> ds = Dataset(points=[[0.0, 0.0], [1.0, 1.0]])
        >>> ds.n, ds.d
        (2, 2)
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    points: np.ndarray
    true_labels: Optional[np.ndarray] = None

    @field_validator("points", mode="before")
    @classmethod
    def validate_points(cls, v: Any) -> np.ndarray:
        """Coerce to a read-only float matrix with at least two rows."""
        points = np.asarray(v, dtype=np.float64)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2 or points.shape[1] < 1:
            raise ValueError("points must be an n x d array with d >= 1")
        if points.shape[0] < 2:
            raise TooFewPointsError(f"dataset needs at least 2 points, got {points.shape[0]}")
        if not np.all(np.isfinite(points)):
            raise ValueError("points must be finite")
        return _readonly(points)

    @field_validator("true_labels", mode="before")
    @classmethod
    def validate_labels(cls, v: Any) -> Optional[np.ndarray]:
        """Coerce labels to a read-only non-negative integer vector."""
        if v is None:
            return None
        labels = np.asarray(v)
        if labels.ndim != 1:
            raise ValueError("true_labels must be one-dimensional")
        if labels.size and (labels.min() < 0 or not np.all(labels == np.round(labels))):
            raise ValueError("true_labels must be non-negative integers")
        return _readonly(labels.astype(np.int64))

    @model_validator(mode="after")
    def check_label_length(self) -> "Dataset":
        """Labels, when present, cover every point."""
        if self.true_labels is not None and len(self.true_labels) != len(self.points):
            raise ValueError(f"true_labels has {len(self.true_labels)} entries for {len(self.points)} points")
        return self

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    @property
    def d(self) -> int:
        return int(self.points.shape[1])

    @property
    def ids(self) -> np.ndarray:
        return np.arange(self.n)

    @property
    def n_classes(self) -> int:
        """Number of classes in the ground truth (max label + 1)."""
        if self.true_labels is None:
            raise DataError("dataset has no true labels")
        return int(self.true_labels.max()) + 1

    def scaled(self, factor: float) -> "Dataset":
        """Return a copy with every coordinate multiplied by ``factor``."""
        return Dataset(points=self.points * factor, true_labels=self.true_labels)


class LabelMask(BaseModel):
    """
    Seed labels for semi-supervised learning.

    Attributes:
        labels: Map from node id to class index
    """

    model_config = ConfigDict(frozen=True)

    labels: Dict[int, int]

    @field_validator("labels")
    @classmethod
    def validate_labels(cls, v: Dict[int, int]) -> Dict[int, int]:
        """At least one seed; ids and classes non-negative."""
        if not v:
            raise ValueError("label mask needs at least one labeled node")
        for node, label in v.items():
            if node < 0 or label < 0:
                raise ValueError(f"invalid seed {node} -> {label}")
        return dict(sorted(v.items()))

    @property
    def labeled_ids(self) -> FrozenSet[int]:
        return frozenset(self.labels)

    def arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """Return (ids, classes), sorted by id."""
        ids = np.fromiter(self.labels.keys(), dtype=np.int64)
        classes = np.fromiter(self.labels.values(), dtype=np.int64)
        return ids, classes

    def check_against(self, n: int, K: int) -> None:
        """
        Check the mask fits a problem with n nodes and K classes.

        Raises:
            DataError: If an id is out of range, a class is outside 0..K-1 or a class has no seed
        """
        ids, classes = self.arrays()
        if ids.max() >= n:
            raise DataError(f"labeled id {int(ids.max())} outside 0..{n - 1}")
        if classes.max() >= K:
            raise DataError(f"class {int(classes.max())} outside 0..{K - 1}")
        missing = sorted(set(range(K)) - set(classes.tolist()))
        if missing:
            raise DataError(f"classes without a labeled node: {missing}")


class GaussianMixtureSpec(BaseModel):
    """
    A mixture of axis-aligned Gaussians.

    Attributes:
        weights: Mixture proportions, strictly positive, summing to 1
        means: Component means
        covariances: Diagonal of each component covariance

    Examples:
        >>> spec = GaussianMixtureSpec.from_proportions([2, 8, 1], [[0.0], [4.0], [9.0]], [[1.0], [1.0], [1.0]])
        >>> round(sum(spec.weights), 12)
        1.0
    """

    model_config = ConfigDict(frozen=True)

    weights: List[float]
    means: List[List[float]]
    covariances: List[List[float]]

    @model_validator(mode="after")
    def check_consistency(self) -> "GaussianMixtureSpec":
        """Weights positive and normalized, one mean and covariance per component, equal dimensions."""
        if not self.weights:
            raise SpecError("mixture needs at least one component")
        if not (len(self.weights) == len(self.means) == len(self.covariances)):
            raise SpecError("weights, means and covariances must have equal length")
        if any(w <= 0 for w in self.weights):
            raise SpecError("mixture weights must be strictly positive")
        if abs(sum(self.weights) - 1.0) > 1e-9:
            raise SpecError(f"mixture weights sum to {sum(self.weights)!r}, not 1")
        dims = {len(m) for m in self.means} | {len(c) for c in self.covariances}
        if len(dims) != 1 or 0 in dims:
            raise SpecError("all means and covariances must share one dimension d >= 1")
        if any(c <= 0 for cov in self.covariances for c in cov):
            raise SpecError("covariance diagonals must be positive")
        return self

    @classmethod
    def from_proportions(
        cls, proportions: List[float], means: List[List[float]], covariances: List[List[float]]
    ) -> "GaussianMixtureSpec":
        """Build a spec from unnormalized proportions such as 2:8:1."""
        total = float(sum(proportions))
        return cls(weights=[p / total for p in proportions], means=means, covariances=covariances)

    @property
    def dim(self) -> int:
        return len(self.means[0])

    @property
    def n_components(self) -> int:
        return len(self.weights)


class UniformSpec(BaseModel):
    """
    Uniform density on an axis-aligned box.

    Attributes:
        low: Lower corner
        high: Upper corner
    """

    model_config = ConfigDict(frozen=True)

    low: List[float]
    high: List[float]

    @model_validator(mode="after")
    def check_box(self) -> "UniformSpec":
        """Corners of equal dimension with low < high on every axis."""
        if not self.low or len(self.low) != len(self.high):
            raise SpecError("low and high must share one dimension d >= 1")
        if any(lo >= hi for lo, hi in zip(self.low, self.high)):
            raise SpecError("low must be strictly below high on every axis")
        return self

    @property
    def dim(self) -> int:
        return len(self.low)

    @property
    def volume(self) -> float:
        return float(np.prod(np.subtract(self.high, self.low)))


DensitySpec = Union[GaussianMixtureSpec, UniformSpec]


class RankVector(BaseModel):
    """
    Per-node density surrogate and its empirical rank.

    Attributes:
        eta: Average (or weighted) neighbour distance per node
        rank: Fraction of nodes whose eta is at least the node's own, in [1/n, 1]
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    eta: np.ndarray
    rank: np.ndarray

    @field_validator("eta", "rank", mode="before")
    @classmethod
    def as_vector(cls, v: Any) -> np.ndarray:
        return _readonly(np.asarray(v, dtype=np.float64).ravel())

    @model_validator(mode="after")
    def check_ranges(self) -> "RankVector":
        if len(self.eta) != len(self.rank):
            raise ValueError("eta and rank must have equal length")
        if np.any(self.eta < 0):
            raise ValueError("eta must be non-negative")
        n = len(self.rank)
        if n and (self.rank.min() < 1.0 / n - 1e-12 or self.rank.max() > 1.0 + 1e-12):
            raise ValueError("rank values must lie in [1/n, 1]")
        return self

    @property
    def n(self) -> int:
        return len(self.rank)


class GraphParams(BaseModel):
    """
    Parameters a graph was built with; fields a construction does not use stay None.

    Attributes:
        kind: Graph construction
        lam: Degree modulation lambda in [0, 1] (serialized as ``lambda``)
        k: Neighbour count
        sigma: RBF width (None = binary weights)
        epsilon: Radius of an epsilon-graph

    Examples:
        >>> GraphParams(kind=GraphKind.RMD, lam=0.4, k=30).label()
        'rmd(lambda=0.4, k=30, sigma=None)'
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    kind: GraphKind
    lam: Optional[float] = Field(default=None, alias="lambda", ge=0.0, le=1.0)
    k: Optional[int] = Field(default=None, ge=1)
    sigma: Optional[float] = Field(default=None, gt=0.0)
    epsilon: Optional[float] = Field(default=None, gt=0.0)

    def label(self) -> str:
        if self.kind == GraphKind.EPSILON:
            return f"epsilon(eps={self.epsilon:.4g}, sigma={self.sigma})"
        return f"{self.kind.value}(lambda={self.lam}, k={self.k}, sigma={self.sigma})"


class Partition(BaseModel):
    """
    Assignment of every node to one of K clusters.

    Attributes:
        assignment: Cluster index per node, each in 0..K-1
        K: Number of clusters
        provenance: Parameters of the graph that produced the partition
        objective: Spectral objective used, when any
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    assignment: np.ndarray
    K: int = Field(..., ge=1)
    provenance: Optional[GraphParams] = None
    objective: Optional[Objective] = None

    @field_validator("assignment", mode="before")
    @classmethod
    def as_labels(cls, v: Any) -> np.ndarray:
        labels = np.asarray(v)
        if labels.ndim != 1:
            raise ValueError("assignment must be one-dimensional")
        return _readonly(labels.astype(np.int64))

    @model_validator(mode="after")
    def check_range(self) -> "Partition":
        if self.assignment.size and (self.assignment.min() < 0 or self.assignment.max() >= self.K):
            raise ValueError(f"cluster indices must lie in 0..{self.K - 1}")
        return self

    @field_serializer("assignment")
    def serialize_assignment(self, assignment: np.ndarray) -> List[int]:
        return assignment.tolist()

    @property
    def n(self) -> int:
        return int(self.assignment.size)

    def sizes(self) -> np.ndarray:
        """Cluster cardinalities, empty clusters included."""
        return np.bincount(self.assignment, minlength=self.K)

    @property
    def min_cluster_size(self) -> int:
        return int(self.sizes().min())

    def canonical(self) -> "Partition":
        """Relabel clusters in order of their smallest member; empty clusters go last."""
        _, first = np.unique(self.assignment, return_index=True)
        order = self.assignment[np.sort(first)]
        mapping = np.empty(self.K, dtype=np.int64)
        mapping[order] = np.arange(len(order))
        unused = np.setdiff1d(np.arange(self.K), order)
        mapping[unused] = np.arange(len(order), self.K)
        return self.model_copy(update={"assignment": _readonly(mapping[self.assignment])})

    def same_clusters(self, other: "Partition") -> bool:
        """True when both partitions group the nodes identically, whatever the labels."""
        return self.K == other.K and np.array_equal(
            self.canonical().assignment, other.canonical().assignment
        )


class SpectralEmbedding(BaseModel):
    """
    Rows of the bottom-K eigenvectors of a graph Laplacian.

    Attributes:
        vectors: n x K matrix, one row per node
        eigenvalues: K eigenvalues in ascending order
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vectors: np.ndarray
    eigenvalues: np.ndarray

    @model_validator(mode="after")
    def check_spectrum(self) -> "SpectralEmbedding":
        if self.vectors.ndim != 2 or self.vectors.shape[1] != len(self.eigenvalues):
            raise ValueError("one eigenvector column per eigenvalue is required")
        if np.any(np.diff(self.eigenvalues) < -1e-10):
            raise ValueError("eigenvalues must be ascending")
        return self

    @property
    def K(self) -> int:
        return len(self.eigenvalues)


class GridPoint(BaseModel):
    """One unresolved point of a search grid; sigma is relative to the mean k-NN distance."""

    model_config = ConfigDict(frozen=True)

    kind: GraphKind
    lam: Optional[float] = None
    k: Optional[int] = None
    sigma_multiplier: Optional[float] = None


DEFAULT_KS = [5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 120, 150]
DEFAULT_LAMBDAS = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
DEFAULT_SIGMA_MULTIPLIERS: List[Optional[float]] = [2.0**j for j in range(-3, 4)]


class SearchGrid(BaseModel):
    """
    The (lambda, k, sigma) grid PCut searches.

    Attributes:
        lambdas: Degree modulation values in [0, 1]
        ks: Neighbour counts
        sigma_multipliers: sigma as a multiple of the mean k-NN distance; None means binary weights
        objective: Spectral objective for clustering mode
        mode: Clustering (spectral) or SSL (harmonic) candidate generation
        kinds: Graph families searched
    """

    model_config = ConfigDict(frozen=True)

    lambdas: List[float] = Field(default_factory=lambda: list(DEFAULT_LAMBDAS), min_length=1)
    ks: List[int] = Field(default_factory=lambda: list(DEFAULT_KS), min_length=1)
    sigma_multipliers: List[Optional[float]] = Field(
        default_factory=lambda: list(DEFAULT_SIGMA_MULTIPLIERS), min_length=1
    )
    objective: Objective = Objective.RCUT
    mode: Mode = Mode.CLUSTERING
    kinds: List[GraphKind] = Field(default_factory=lambda: [GraphKind.RMD], min_length=1)

    @field_validator("lambdas")
    @classmethod
    def validate_lambdas(cls, v: List[float]) -> List[float]:
        if any(not 0.0 <= lam <= 1.0 for lam in v):
            raise ValueError("lambdas must lie in [0, 1]")
        return v

    @field_validator("ks")
    @classmethod
    def validate_ks(cls, v: List[int]) -> List[int]:
        if any(k < 1 for k in v):
            raise ValueError("ks must be positive")
        return v

    @field_validator("sigma_multipliers")
    @classmethod
    def validate_sigmas(cls, v: List[Optional[float]]) -> List[Optional[float]]:
        if any(s is not None and s <= 0 for s in v):
            raise ValueError("sigma multipliers must be positive")
        return v

    @field_validator("kinds")
    @classmethod
    def validate_kinds(cls, v: List[GraphKind]) -> List[GraphKind]:
        if GraphKind.BASELINE_KNN in v:
            raise ValueError("the baseline graph is not a searchable family")
        return v

    @classmethod
    def default(cls, n: int, **overrides: Any) -> "SearchGrid":
        """The standard grid with k restricted to [1, n-1]."""
        grid = cls(**overrides)
        return grid.restricted(n)

    def restricted(self, n: int) -> "SearchGrid":
        """Drop neighbour counts a dataset of n points cannot support."""
        ks = [k for k in self.ks if 1 <= k <= n - 1]
        if not ks:
            ks = [max(1, min(self.ks[0], n - 1))]
        return self.model_copy(update={"ks": ks})

    def points(self) -> List[GridPoint]:
        """Enumerate grid points in a fixed order: kind, lambda, k, sigma; duplicates dropped."""
        seen = set()
        result: List[GridPoint] = []
        for kind in self.kinds:
            if kind == GraphKind.FULL_ARBF:
                candidates = [GridPoint(kind=kind)]
            elif kind == GraphKind.RMD:
                candidates = [
                    GridPoint(kind=kind, lam=lam, k=k, sigma_multiplier=s)
                    for lam in self.lambdas
                    for k in self.ks
                    for s in self.sigma_multipliers
                ]
            else:
                candidates = [
                    GridPoint(kind=kind, lam=1.0 if kind == GraphKind.KNN else None, k=k, sigma_multiplier=s)
                    for k in self.ks
                    for s in self.sigma_multipliers
                ]
            for point in candidates:
                if point not in seen:
                    seen.add(point)
                    result.append(point)
        return result


class CandidateRecord(BaseModel):
    """
    One candidate partition with its evaluation on the baseline graph.

    Attributes:
        params: Resolved parameters of the graph that produced the partition
        sigma_multiplier: Grid sigma multiplier, when the candidate came from the grid
        partition: The candidate K-partition
        cut0: K-way cut value on the baseline graph
        min_cluster_size: Smallest cluster size
        feasible: Whether min_cluster_size reaches ceil(delta * n)
        q: Cut ratio against the balanced reference (K=2 only)
        y: Imbalance coefficient, smallest cluster fraction
        forced: True when the caller injected the partition
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    params: Optional[GraphParams] = None
    sigma_multiplier: Optional[float] = None
    partition: Partition
    cut0: float
    min_cluster_size: int
    feasible: bool
    q: Optional[float] = None
    y: float
    forced: bool = False


def _finite_or_null(value: Any) -> Any:
    """Replace inf and nan floats by None, recursively."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {key: _finite_or_null(item) for key, item in value.items()}
    if isinstance(value, list):
        return [_finite_or_null(item) for item in value]
    return value


class PCutReport(BaseModel):
    """
    Result of a PCut run.

    Attributes:
        candidates: Every candidate in grid order, forced candidates last
        selected: Index of the feasible candidate with minimal cut0, or None
        delta: Minimum cluster-size fraction used
        min_size: ceil(delta * n)
        n: Number of nodes
        K: Number of clusters
        mode: Candidate generation mode
        objective: Spectral objective
        baseline_params: Parameters of the baseline graph (k0, sigma0)
        ssl_error: SSL error rate of the selected partition, when labels allow it
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    candidates: List[CandidateRecord]
    selected: Optional[int] = None
    delta: float
    min_size: int
    n: int
    K: int
    mode: Mode = Mode.CLUSTERING
    objective: Objective = Objective.RCUT
    baseline_params: GraphParams
    ssl_error: Optional[float] = None

    @model_validator(mode="after")
    def check_selection(self) -> "PCutReport":
        if self.selected is not None:
            chosen = self.candidates[self.selected]
            if not chosen.feasible:
                raise ValueError("selected candidate must be feasible")
            best = min(c.cut0 for c in self.candidates if c.feasible)
            if chosen.cut0 > best:
                raise ValueError("selected candidate must have minimal cut0")
        return self

    @property
    def selected_candidate(self) -> Optional[CandidateRecord]:
        return None if self.selected is None else self.candidates[self.selected]

    @property
    def selected_partition(self) -> Optional[Partition]:
        chosen = self.selected_candidate
        return None if chosen is None else chosen.partition

    def summary_rows(self) -> List[Dict[str, Any]]:
        """Per-candidate rows for the CSV summary."""
        rows = []
        for record in self.candidates:
            params = record.params
            rows.append(
                {
                    "lambda": "" if params is None or params.lam is None else params.lam,
                    "k": "" if params is None or params.k is None else params.k,
                    "sigma": "" if params is None or params.sigma is None else repr(params.sigma),
                    "cut0": repr(record.cut0),
                    "min_cluster": record.min_cluster_size,
                    "feasible": int(record.feasible),
                }
            )
        return rows

    def to_json(self, include_partitions: bool = False) -> str:
        """
        Serialize the report as one JSON document.

        Candidate assignments are omitted unless ``include_partitions``; the selected
        assignment is always written. Non-finite numbers, such as the cut0 of an
        empty-cluster candidate, are written as null.
        """
        exclude = None if include_partitions else {"candidates": {"__all__": {"partition"}}}
        data = self.model_dump(mode="json", by_alias=True, exclude=exclude)
        chosen = self.selected_partition
        data["selected_assignment"] = None if chosen is None else chosen.assignment.tolist()
        return json.dumps(_finite_or_null(data), indent=2, allow_nan=False)

    def write_json(self, path: Union[str, Path], include_partitions: bool = False) -> Path:
        path = Path(path)
        path.write_text(self.to_json(include_partitions=include_partitions) + "\n", encoding="utf-8")
        return path


class SweepEntry(BaseModel):
    """One delta of a delta sweep."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    delta: float
    cut0: Optional[float] = None
    partition: Optional[Partition] = None
    params: Optional[GraphParams] = None


class HyperplaneCut(BaseModel):
    """The cut {x : x[axis] <= threshold}."""

    model_config = ConfigDict(frozen=True)

    axis: int = Field(..., ge=0)
    threshold: float


class LimitCheckResult(BaseModel):
    """
    Empirical scaled cut values against their predicted limit.

    Attributes:
        n_values: Sample sizes
        empirical: Scaled RCut per sample size
        predicted: Predicted limit value
        relative_errors: |empirical - predicted| / predicted per sample size
    """

    model_config = ConfigDict(frozen=True)

    n_values: List[int]
    empirical: List[float]
    predicted: float
    relative_errors: List[float]

    @model_validator(mode="after")
    def check_lengths(self) -> "LimitCheckResult":
        if not (len(self.n_values) == len(self.empirical) == len(self.relative_errors)):
            raise ValueError("n_values, empirical and relative_errors must have equal length")
        return self


def min_size_for(delta: float, n: int) -> int:
    """ceil(delta * n), tolerant to floating-point noise in the product."""
    return int(math.ceil(delta * n - 1e-9))
