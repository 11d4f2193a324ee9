# tests/test_core/test_spectral.py
"""Tests for Laplacians, embeddings, k-means and spectral clustering."""

import math

import numpy as np
import pytest

from pcut.core.exceptions import ParamError
from pcut.core.models import GraphKind, GraphParams, Objective, Partition
from pcut.core.settings import PCutSettings
from pcut.core.spectral import embed, kmeans, laplacian, rcut_ncut_value, spectral_cluster
from pcut.graphs.cut import cut_value


class TestLaplacian:
    """Test cases for graph Laplacians."""

    def test_single_edge(self, graph_factory):
        """Test both objectives on one unit edge."""
        edge = graph_factory(2, [(0, 1)])
        expected = [[1.0, -1.0], [-1.0, 1.0]]

        assert laplacian(edge, Objective.RCUT).toarray().tolist() == expected
        assert laplacian(edge, Objective.NCUT).toarray() == pytest.approx(np.array(expected))

    def test_constant_vector_in_kernel(self, bridged_cliques):
        """Test L 1 = 0 for the unnormalized Laplacian."""
        lap = laplacian(bridged_cliques, Objective.RCUT)
        assert np.abs(lap @ np.ones(lap.shape[0])).max() == 0.0

    def test_isolated_node_ncut(self, graph_factory):
        """Test isolated nodes get a zero D^-1/2 entry."""
        graph = graph_factory(3, [(0, 1)])
        lap = laplacian(graph, Objective.NCUT).toarray()
        assert lap[2].tolist() == [0.0, 0.0, 1.0]


class TestEmbed:
    """Test cases for spectral embeddings."""

    def test_zero_multiplicity_equals_components(self, two_cliques, two_triangles):
        """Test near-zero eigenvalue count equals the component count."""
        for graph in (two_cliques, two_triangles):
            values = embed(graph, 3).eigenvalues
            assert int(np.sum(values < 1e-8)) == graph.n_components()
            assert values.min() >= -1e-8

    def test_eigen_residuals(self, bridged_cliques):
        """Test every returned pair satisfies L v = mu v."""
        emb = embed(bridged_cliques, 3, Objective.RCUT)
        lap = laplacian(bridged_cliques, Objective.RCUT)
        for j, mu in enumerate(emb.eigenvalues):
            v = emb.vectors[:, j]
            assert np.linalg.norm(lap @ v - mu * v) <= 1e-6 * np.linalg.norm(v)

    def test_sign_convention(self, bridged_cliques):
        """Test each column's largest-magnitude entry is positive."""
        vectors = embed(bridged_cliques, 2).vectors
        for j in range(vectors.shape[1]):
            assert vectors[np.argmax(np.abs(vectors[:, j])), j] > 0

    def test_ncut_rows_normalized(self, bridged_cliques):
        """Test ncut rows have unit length."""
        vectors = embed(bridged_cliques, 2, Objective.NCUT).vectors
        assert np.linalg.norm(vectors, axis=1) == pytest.approx(np.ones(20))

    def test_iterative_solver_agrees(self, bridged_cliques):
        """Test the sparse solver matches the dense one."""
        dense = embed(bridged_cliques, 2, settings=PCutSettings(dense_eigen_limit=1000))
        sparse = embed(bridged_cliques, 2, settings=PCutSettings(dense_eigen_limit=2))

        assert sparse.eigenvalues == pytest.approx(dense.eigenvalues, abs=1e-7)
        assert sparse.vectors == pytest.approx(dense.vectors, abs=1e-5)

    def test_invalid_k(self, triangle):
        """Test K outside 1..n."""
        with pytest.raises(ParamError):
            embed(triangle, 4)


class TestKmeans:
    """Test cases for k-means discretization."""

    def test_separated_groups(self):
        """Test two well separated coordinate groups."""
        rows = np.vstack([np.zeros((5, 2)), np.full((5, 2), 10.0)])
        assert kmeans(rows, 2, seed=1).assignment.tolist() == [0] * 5 + [1] * 5

    def test_single_cluster(self):
        """Test K = 1 puts every row in cluster 0."""
        assert kmeans(np.random.default_rng(0).random((6, 2)), 1).assignment.tolist() == [0] * 6

    def test_identical_rows_are_repaired(self):
        """Test no cluster stays empty when every row coincides."""
        partition = kmeans(np.ones((10, 2)), 2, seed=4)
        assert partition.min_cluster_size >= 1
        assert partition.sizes().sum() == 10

    def test_too_few_rows(self):
        """Test n < K."""
        with pytest.raises(ParamError):
            kmeans(np.zeros((2, 1)), 3)

    def test_deterministic(self):
        """Test equal seeds give equal partitions."""
        rows = np.random.default_rng(5).random((40, 3))
        a = kmeans(rows, 4, seed=9)
        b = kmeans(rows, 4, seed=9)
        assert a.assignment.tolist() == b.assignment.tolist()


class TestSpectralCluster:
    """Test cases for spectral clustering."""

    def test_disjoint_cliques(self, two_cliques):
        """Test exact component recovery with zero cut."""
        partition = spectral_cluster(two_cliques, 2)

        assert partition.sizes().tolist() == [12, 8]
        assert cut_value(two_cliques, partition) == 0.0
        assert partition.provenance == two_cliques.params
        assert partition.objective == Objective.RCUT

    def test_path_of_four(self, path4):
        """Test the minimum-RCut split of P4."""
        assert spectral_cluster(path4, 2).assignment.tolist() == [0, 0, 1, 1]

    def test_ncut_bridge(self, bridged_cliques):
        """Test ncut splits at the bridge."""
        partition = spectral_cluster(bridged_cliques, 2, Objective.NCUT)
        assert partition.assignment.tolist() == [0] * 12 + [1] * 8

    def test_beats_random_partitions(self, bridged_cliques):
        """Test the spectral RCut is at most the median over random 2-partitions."""
        partition = spectral_cluster(bridged_cliques, 2)
        rng = np.random.default_rng(11)
        random_values = [
            rcut_ncut_value(bridged_cliques, Partition(assignment=rng.integers(0, 2, 20), K=2))
            for _ in range(100)
        ]
        assert rcut_ncut_value(bridged_cliques, partition) <= np.median(random_values)


class TestObjectiveValues:
    """Test cases for RCut and NCut values."""

    def test_path_split(self, path3):
        """Test RCut 4.5 and NCut 4/3 for {0}|{1,2}."""
        partition = Partition(assignment=[0, 1, 1], K=2)

        assert rcut_ncut_value(path3, partition, Objective.RCUT) == pytest.approx(4.5)
        assert rcut_ncut_value(path3, partition, Objective.NCUT) == pytest.approx(4 / 3)

    def test_zero_cut(self, two_edges):
        """Test a component split has zero objective."""
        assert rcut_ncut_value(two_edges, Partition(assignment=[0, 0, 1, 1], K=2)) == 0.0

    def test_empty_cluster(self, path3):
        """Test an empty cluster gives an infinite objective."""
        assert math.isinf(rcut_ncut_value(path3, Partition(assignment=[0, 0, 0], K=2)))
        assert math.isinf(rcut_ncut_value(path3, Partition(assignment=[0, 0, 0], K=2), Objective.NCUT))

    def test_kway_rcut_has_no_size_factor(self, path3):
        """Test three singletons of the path sum Cut_i/|C_i| without the factor n."""
        partition = Partition(assignment=[0, 1, 2], K=3)

        assert rcut_ncut_value(path3, partition, Objective.RCUT) == pytest.approx(1 + 2 + 1)
        assert rcut_ncut_value(path3, partition, Objective.NCUT) == pytest.approx(1 / 1 + 2 / 2 + 1 / 1)

    def test_weighted_graph(self, graph_factory):
        """Test weights enter the cut and the volumes."""
        graph = graph_factory(3, [(0, 1), (1, 2)], [2.0, 0.5])
        partition = Partition(assignment=[0, 0, 1], K=2)

        assert rcut_ncut_value(graph, partition, Objective.RCUT) == pytest.approx(3 * 0.5 * (1 / 2 + 1 / 1))
        assert rcut_ncut_value(graph, partition, Objective.NCUT) == pytest.approx(0.5 / 4.5 + 0.5 / 0.5)


def test_provenance_params():
    """Test provenance survives for non-unit parameter sets."""
    from pcut.graphs.base import Graph

    params = GraphParams(kind=GraphKind.RMD, lam=0.2, k=1)
    graph = Graph.from_edges(4, [0, 2], [1, 3], [1.0, 1.0], params)
    assert spectral_cluster(graph, 2).provenance == params
