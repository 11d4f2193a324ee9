"""
Graph model and the abstract builder interface.

Every graph construction implements ``GraphBuilder``; finished graphs are
immutable, symmetric, loop-free and store only strictly positive weights.
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import TYPE_CHECKING, Any, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from scipy import sparse
from scipy.sparse import csgraph

from pcut.core.exceptions import ParseError
from pcut.core.models import Dataset, GraphKind, GraphParams, RankVector

if TYPE_CHECKING:
    from pcut.graphs.neighbors import NeighborTable


class Graph(BaseModel):
    """
    Weighted undirected graph over a dataset's node set.

    Attributes:
        adjacency: Symmetric n x n CSR matrix of weights (zero = no edge)
        kind: Construction that produced the graph
        params: Parameters of that construction

    Examples:
        >>> g = Graph.from_edges(3, [0, 1], [1, 2], [1.0, 1.0], GraphParams(kind=GraphKind.KNN, k=1))
        >>> g.n_edges, g.n_components()
        (2, 1)
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    adjacency: sparse.csr_matrix
    kind: GraphKind
    params: GraphParams

    @field_validator("adjacency", mode="before")
    @classmethod
    def as_csr(cls, v: Any) -> sparse.csr_matrix:
        matrix = sparse.csr_matrix(v, dtype=np.float64)
        matrix.eliminate_zeros()
        matrix.sort_indices()
        return matrix

    @model_validator(mode="after")
    def check_structure(self) -> "Graph":
        """Square, exactly symmetric, no self-loops, positive weights."""
        a = self.adjacency
        if a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be square")
        if a.diagonal().any():
            raise ValueError("graphs must not contain self-loops")
        if a.nnz and a.data.min() <= 0:
            raise ValueError("edge weights must be positive")
        if (a != a.T).nnz:
            raise ValueError("adjacency must be symmetric")
        return self

    @classmethod
    def from_edges(
        cls,
        n: int,
        u: Any,
        v: Any,
        w: Any,
        params: GraphParams,
        kind: Optional[GraphKind] = None,
    ) -> "Graph":
        """Build a graph from undirected edges listed once each (u != v)."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        w = np.asarray(w, dtype=np.float64)
        keep = w > 0
        u, v, w = u[keep], v[keep], w[keep]
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        data = np.concatenate([w, w])
        adjacency = sparse.csr_matrix((data, (rows, cols)), shape=(n, n))
        return cls(adjacency=adjacency, kind=kind or params.kind, params=params)

    @property
    def n(self) -> int:
        return int(self.adjacency.shape[0])

    @property
    def n_edges(self) -> int:
        return int(self.adjacency.nnz // 2)

    @property
    def is_binary(self) -> bool:
        return bool(self.adjacency.nnz == 0 or np.all(self.adjacency.data == 1.0))

    def degrees(self) -> np.ndarray:
        """Weighted degree (volume) of every node."""
        return np.asarray(self.adjacency.sum(axis=1)).ravel()

    def neighbor_counts(self) -> np.ndarray:
        return np.diff(self.adjacency.indptr)

    def neighbors(self, node: int) -> np.ndarray:
        a = self.adjacency
        return a.indices[a.indptr[node] : a.indptr[node + 1]]

    def edges(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(u, v, w) arrays of every edge with u < v, sorted by (u, v)."""
        upper = sparse.triu(self.adjacency, k=1).tocsr()
        upper.sort_indices()
        coo = upper.tocoo()
        return coo.row.astype(np.int64), coo.col.astype(np.int64), coo.data

    def components(self) -> Tuple[int, np.ndarray]:
        """(number of connected components, component label per node)."""
        count, labels = csgraph.connected_components(self.adjacency, directed=False)
        return int(count), labels

    def n_components(self) -> int:
        return self.components()[0]

    def header(self) -> str:
        p = self.params

        def fmt(value: Optional[float]) -> str:
            return "null" if value is None else repr(value)

        line = f"n={self.n} kind={self.kind.value} lambda={fmt(p.lam)} k={fmt(p.k)} sigma={fmt(p.sigma)}"
        if p.epsilon is not None:
            line += f" epsilon={fmt(p.epsilon)}"
        return line

    def to_edge_list(self) -> str:
        """Header line then one "u,v,w" line per edge with u < v."""
        u, v, w = self.edges()
        lines = [self.header()]
        lines.extend(f"{a},{b},{format(c, '.17g')}" for a, b, c in zip(u.tolist(), v.tolist(), w.tolist()))
        return "\n".join(lines) + "\n"

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(self.to_edge_list(), encoding="utf-8")
        return path

    @classmethod
    def from_edge_list(cls, text: str) -> "Graph":
        """
        Parse the edge-list format written by ``to_edge_list``.

        Raises:
            ParseError: If the header or an edge line is malformed
        """
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise ParseError("empty edge list")
        fields = {}
        for token in lines[0].split():
            key, sep, value = token.partition("=")
            if not sep:
                raise ParseError(f"bad header token {token!r}", row=1)
            fields[key] = None if value == "null" else value
        try:
            n = int(fields["n"])
            kind = GraphKind(fields["kind"])
            params = GraphParams(
                kind=kind,
                lam=None if fields.get("lambda") is None else float(fields["lambda"]),
                k=None if fields.get("k") is None else int(fields["k"]),
                sigma=None if fields.get("sigma") is None else float(fields["sigma"]),
                epsilon=None if fields.get("epsilon") is None else float(fields["epsilon"]),
            )
        except (KeyError, ValueError) as e:
            raise ParseError(f"bad header: {e}", row=1) from None

        u, v, w = [], [], []
        for row, line in enumerate(lines[1:], start=2):
            parts = line.split(",")
            if len(parts) != 3:
                raise ParseError("expected 'u,v,w'", row=row)
            try:
                u.append(int(parts[0]))
                v.append(int(parts[1]))
                w.append(float(parts[2]))
            except ValueError:
                raise ParseError("non-numeric edge field", row=row) from None
        return cls.from_edges(n, u, v, w, params, kind=kind)


def union_pairs(n: int, rows: np.ndarray, cols: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Union ("OR") symmetrization of directed pairs.

    Returns:
        Unique undirected pairs (u, v) with u < v, sorted
    """
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    lo, hi = np.minimum(rows, cols), np.maximum(rows, cols)
    keep = lo != hi
    keys = np.unique(lo[keep] * n + hi[keep])
    return keys // n, keys % n


def pair_distances(points: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Euclidean distance of every pair."""
    return np.sqrt(np.sum((points[u] - points[v]) ** 2, axis=1))


def rbf_weights(distances: np.ndarray, sigma: Optional[float]) -> np.ndarray:
    """exp(-d^2 / (2 sigma^2)), or all ones when sigma is None (binary graph)."""
    if sigma is None:
        return np.ones_like(distances)
    return np.exp(-(distances**2) / (2.0 * sigma**2))


class GraphBuilder(ABC):
    """
    Abstract base class for graph constructions.

    All constructions inherit from this class; the builder registry maps each
    ``GraphKind`` to one instance.
    """

    kind: GraphKind

    @abstractmethod
    def check_params(self, params: GraphParams, n: int) -> None:
        """
        Validate parameters for a dataset of n points.

        Raises:
            ParamError: If a required parameter is missing or out of range
        """
        pass

    @abstractmethod
    def build(
        self,
        dataset: Dataset,
        params: GraphParams,
        *,
        rank: Optional[RankVector] = None,
        neighbors: Optional["NeighborTable"] = None,
    ) -> Graph:
        """
        Construct the graph.

        Args:
            dataset: Node set
            params: Construction parameters
            rank: Node ranks (rank-modulated constructions only)
            neighbors: Precomputed neighbour table to reuse

        Returns:
            The finished graph

        Examples:
            >>> builder = builder_for(GraphKind.KNN)
            >>> graph = builder.build(dataset, GraphParams(kind=GraphKind.KNN, k=10))
        """
        pass
