# tests/test_core/test_ranking.py
"""Tests for density ranks and p-values."""

import numpy as np
import pytest

from pcut.core.exceptions import IsolatedNodeError
from pcut.core.models import Dataset, GraphKind, GraphParams
from pcut.core.ranking import (
    PValueOracle,
    analytic_pvalue,
    compute_eta,
    compute_rank,
    compute_ranks,
    default_k0,
    pvalues,
    weighted_window,
)
from pcut.data import densities
from pcut.graphs.dense import build_epsilon
from pcut.graphs.knn import build_baseline


class TestComputeEta:
    """Test cases for the eta statistic."""

    def test_collinear_points(self, line3):
        """Test mean neighbour distance on the 1-NN baseline."""
        eta = compute_eta(line3, build_baseline(line3, 1))
        assert eta.tolist() == [1.0, 1.0, 2.0]

    def test_equal_distances(self):
        """Test equilateral points give a constant eta."""
        ds = Dataset(points=[[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]])
        eta = compute_eta(ds, build_baseline(ds, 2))
        assert eta == pytest.approx([1.0, 1.0, 1.0])

    def test_duplicate_points(self):
        """Test duplicates are each other's nearest neighbour at distance zero."""
        ds = Dataset(points=[0.0, 0.0, 5.0])
        eta = compute_eta(ds, build_baseline(ds, 1))
        assert eta.tolist() == [0.0, 0.0, 5.0]

    def test_weighted_single_neighbor(self, line3):
        """Test the weighted form reduces to the neighbour distance for one neighbour."""
        eta = compute_eta(line3, build_baseline(line3, 1), weighted=True)
        assert eta.tolist() == [1.0, 1.0, 2.0]

    def test_weighted_window(self):
        """Test the order-statistic window stays inside the neighbour list."""
        assert weighted_window(10) == (5, 3, 7)
        assert weighted_window(1) == (1, 1, 1)
        assert weighted_window(3) == (1, 1, 1)
        l, first, last = weighted_window(30)
        assert 1 <= first <= l <= last <= 30

    def test_isolated_node(self):
        """Test a node without neighbours on a non-kNN graph."""
        ds = Dataset(points=[0.0, 0.1, 5.0])
        graph = build_epsilon(ds, GraphParams(kind=GraphKind.EPSILON, epsilon=0.5))

        with pytest.raises(IsolatedNodeError) as exc_info:
            compute_eta(ds, graph)
        assert exc_info.value.node == 2

    def test_adjacency_neighbors(self):
        """Test non-kNN graphs average over their adjacency."""
        ds = Dataset(points=[0.0, 1.0, 3.0])
        graph = build_epsilon(ds, GraphParams(kind=GraphKind.EPSILON, epsilon=2.0))
        assert compute_eta(ds, graph).tolist() == [1.0, 1.5, 2.0]


class TestComputeRank:
    """Test cases for empirical ranks."""

    def test_ties_share_the_higher_rank(self):
        """Test the example eta = (1, 1, 2)."""
        assert compute_rank(np.array([1.0, 1.0, 2.0])).rank.tolist() == pytest.approx([1.0, 1.0, 1 / 3])

    def test_all_equal(self):
        """Test constant eta gives rank 1 everywhere."""
        assert compute_rank(np.full(5, 0.7)).rank.tolist() == [1.0] * 5

    def test_strictly_increasing(self):
        """Test distinct eta gives ranks 1, 3/4, 2/4, 1/4."""
        assert compute_rank(np.array([0.1, 0.2, 0.3, 0.4])).rank.tolist() == [1.0, 0.75, 0.5, 0.25]

    def test_distinct_ranks_are_a_permutation(self):
        """Test the multiset of ranks is {1/n, ..., 1} for distinct eta."""
        eta = np.random.default_rng(3).random(50)
        ranks = compute_rank(eta).rank
        assert sorted(ranks.tolist()) == pytest.approx([(i + 1) / 50 for i in range(50)])


class TestComputeRanks:
    """Test cases for the baseline-and-rank pipeline."""

    def test_default_k0(self):
        """Test ceil(sqrt(n)) capped at n - 1."""
        assert default_k0(1000) == 32
        assert default_k0(20) == 5
        assert default_k0(2) == 1

    def test_pipeline(self, line3):
        """Test ranks and the baseline come back together."""
        rank, baseline = compute_ranks(line3, k0=1)

        assert baseline.kind == GraphKind.BASELINE_KNN
        assert rank.eta.tolist() == [1.0, 1.0, 2.0]
        assert rank.rank.tolist() == pytest.approx([1.0, 1.0, 1 / 3])


class TestPValues:
    """Test cases for sublevel-set p-values."""

    def test_gaussian_mode(self):
        """Test the mode has full sublevel mass."""
        assert analytic_pvalue(densities.gaussian_1d_spec(), 0.0) == pytest.approx(1.0)

    def test_gaussian_tail(self):
        """Test p(1.96) is the two-sided 5% tail."""
        assert analytic_pvalue(densities.gaussian_1d_spec(), 1.96) == pytest.approx(0.05, abs=1e-3)
        assert analytic_pvalue(densities.gaussian_1d_spec(), 10.0) < 1e-6

    def test_bimodal_line(self):
        """Test root bracketing on a symmetric two-component mixture."""
        spec = densities.bimodal_1d_spec()
        values = pvalues(spec, np.array([[-2.5], [0.0], [2.5], [6.0]]))

        assert values[0] == pytest.approx(values[2], abs=1e-4)
        assert values[2] > 0.95
        assert values[1] < values[2]
        assert values[3] < values[1]
        assert np.all((values >= 0) & (values <= 1))

    def test_uniform(self):
        """Test uniform boxes have p = 1 inside and 0 outside."""
        values = pvalues(densities.uniform_1d_spec(), np.array([0.5, 2.0]))
        assert values.tolist() == [1.0, 0.0]

    def test_oracle_agrees_with_closed_form(self):
        """Test the Monte Carlo oracle against the chi-square tail."""
        spec = densities.gaussian_1d_spec()
        oracle = PValueOracle(spec, n_samples=100_000, seed=1)
        points = np.array([[0.0], [1.0], [1.96]])
        assert oracle(points) == pytest.approx(pvalues(spec, points), abs=0.01)
