# tests/test_core/test_analysis.py
"""Tests for hyperplane cuts and the limit checks."""

import math

import numpy as np
import pytest

from pcut.core.analysis import (
    cut_curve,
    hyperplane_partition,
    limit_constant,
    neighbor_schedule,
    predicted_limit,
    rank_schedule,
    rho,
    scaled_rcut,
    unit_ball_volume,
    verify_thm1,
    verify_thm2,
)
from pcut.core.exceptions import ParamError
from pcut.core.models import CutObjective, Dataset, HyperplaneCut, LimitCheckResult, UniformSpec
from pcut.data import densities


@pytest.fixture
def four_points():
    """Points 0, 1, 10, 11 on the line."""
    return Dataset(points=[0.0, 1.0, 10.0, 11.0])


class TestHyperplanePartition:
    """Test cases for hyperplane partitions."""

    def test_split_between_groups(self, two_groups):
        """Test x[0] <= 50 separates the two groups."""
        partition = hyperplane_partition(two_groups, HyperplaneCut(axis=0, threshold=50.0))
        assert partition.assignment.tolist() == [0] * 12 + [1] * 8

    def test_empty_side(self, two_groups):
        """Test a threshold below every point puts all nodes in cluster 1."""
        partition = hyperplane_partition(two_groups, HyperplaneCut(axis=0, threshold=-1.0))
        assert partition.sizes().tolist() == [0, 20]

    def test_median_threshold(self):
        """Test the median splits distinct coordinates evenly."""
        ds = Dataset(points=np.random.default_rng(2).normal(size=(31, 2)))
        threshold = float(np.median(ds.points[:, 1]))
        sizes = hyperplane_partition(ds, HyperplaneCut(axis=1, threshold=threshold)).sizes()
        assert abs(int(sizes[0]) - int(sizes[1])) <= 1

    def test_axis_out_of_range(self, two_groups):
        """Test the axis must be below the dimension."""
        with pytest.raises(ParamError):
            hyperplane_partition(two_groups, HyperplaneCut(axis=2, threshold=0.0))


class TestCutCurve:
    """Test cases for cut curves."""

    def test_plain_cut(self, four_points, two_edges):
        """Test crossing weights along the line."""
        curve = cut_curve(four_points, two_edges, 0, [-1.0, 0.5, 5.0], CutObjective.CUT)
        assert curve == [(-1.0, None), (0.5, 1.0), (5.0, 0.0)]

    def test_rcut_and_ncut(self, four_points, two_edges):
        """Test normalized objectives at a one-edge split and a component split."""
        rcut = dict(cut_curve(four_points, two_edges, 0, [0.5, 5.0], "rcut"))
        ncut = dict(cut_curve(four_points, two_edges, 0, [5.0], CutObjective.NCUT))

        assert rcut[0.5] == pytest.approx(4 * (1 + 1 / 3))
        assert rcut[5.0] == 0.0
        assert ncut[5.0] == 0.0


class TestLimitConstants:
    """Test cases for the constants of the limit formula."""

    def test_unit_ball_volume(self):
        """Test volumes in dimensions 0 to 3."""
        assert unit_ball_volume(0) == pytest.approx(1.0)
        assert unit_ball_volume(1) == pytest.approx(2.0)
        assert unit_ball_volume(2) == pytest.approx(math.pi)
        assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)

    def test_limit_constant(self):
        """Test C_1 = 1/4."""
        assert limit_constant(1) == pytest.approx(0.25)

    def test_rho(self):
        """Test the modulation factor at the ends of the lambda range."""
        assert rho([0.0, 1.0], 0.0).tolist() == [0.0, 2.0]
        assert float(rho(0.3, 1.0)) == pytest.approx(1.0)
        assert np.all(rho(np.linspace(0, 1, 11), 0.4) <= 2.0)

    def test_rank_schedule(self):
        """Test k0 = ceil(n^exponent), capped at n - 1."""
        assert rank_schedule(2000) == 45
        assert rank_schedule(2000, 0.8) == 438
        assert rank_schedule(3, 0.9) == 2
        with pytest.raises(ParamError):
            rank_schedule(100, 1.0)

    def test_neighbor_schedule(self):
        """Test k_n grows as n^0.7 in one dimension and stays below n."""
        assert neighbor_schedule(1000, 1) == 126
        assert neighbor_schedule(3, 1) == 2
        assert neighbor_schedule(2, 2) == 1


class TestPredictedLimit:
    """Test cases for predicted limits."""

    def test_uniform_midpoint(self):
        """Test the uniform density on [0, 1] cut at 0.5 with lambda = 1."""
        cut = HyperplaneCut(axis=0, threshold=0.5)
        assert predicted_limit(densities.uniform_1d_spec(), cut, 1.0) == pytest.approx(1.0)
        assert predicted_limit(densities.uniform_1d_spec(), cut, 0.0) == pytest.approx(4.0)

    def test_uniform_off_center(self):
        """Test the balance factor at 0.3."""
        cut = HyperplaneCut(axis=0, threshold=0.3)
        expected = 0.25 * (1 / 0.3 + 1 / 0.7)
        assert predicted_limit(densities.uniform_1d_spec(), cut, 1.0) == pytest.approx(expected)

    def test_valley_grows_with_lambda(self):
        """Test a valley cut costs less for smaller lambda."""
        spec = densities.bimodal_1d_spec()
        cut = HyperplaneCut(axis=0, threshold=0.0)
        values = [predicted_limit(spec, cut, lam) for lam in (0.0, 0.2, 0.6, 1.0)]
        assert values == sorted(values)
        assert values[1] < values[-1]

    def test_two_dimensional_uniform(self):
        """Test the line integral over a unit square."""
        spec = UniformSpec(low=[0.0, 0.0], high=[1.0, 1.0])
        value = predicted_limit(spec, HyperplaneCut(axis=0, threshold=0.5), 1.0)
        assert value == pytest.approx(limit_constant(2) * 4.0)

    def test_invalid(self):
        """Test high dimensions and cuts without mass on one side."""
        with pytest.raises(ParamError):
            predicted_limit(densities.uniform_1d_spec(), HyperplaneCut(axis=0, threshold=0.5), 1.0, d=3)
        with pytest.raises(ParamError):
            predicted_limit(densities.uniform_1d_spec(), HyperplaneCut(axis=0, threshold=1.0), 1.0)
        with pytest.raises(ParamError):
            predicted_limit(densities.uniform_1d_spec(), HyperplaneCut(axis=1, threshold=0.5), 1.0)


class TestScaledRcut:
    """Test cases for scaled RCut values."""

    def test_path_split(self, four_points, graph_factory):
        """Test (1/k)(n/k) 2 Cut (1/2 + 1/2) on a path cut in the middle."""
        path = graph_factory(4, [(0, 1), (1, 2), (2, 3)])
        assert scaled_rcut(four_points, path, HyperplaneCut(axis=0, threshold=5.0), 1) == pytest.approx(8.0)

    def test_empty_side(self, four_points, two_edges):
        """Test an empty side gives an infinite value."""
        assert math.isinf(scaled_rcut(four_points, two_edges, HyperplaneCut(axis=0, threshold=20.0), 1))


class TestVerification:
    """Test cases for the numerical limit checks."""

    def test_thm1_shape(self):
        """Test one mean error per sample size."""
        results = verify_thm1(densities.gaussian_1d_spec(), [50, 80], seed=0)
        assert [n for n, _ in results] == [50, 80]
        assert all(0.0 <= error <= 1.0 for _, error in results)

    def test_thm2_shape(self):
        """Test the result carries one entry per sample size."""
        result = verify_thm2(densities.uniform_1d_spec(), HyperplaneCut(axis=0, threshold=0.5), 1.0, [200], seed=3)

        assert isinstance(result, LimitCheckResult)
        assert result.n_values == [200]
        assert result.predicted == pytest.approx(1.0)
        assert result.empirical[0] > 0
        assert result.relative_errors[0] == pytest.approx(abs(result.empirical[0] - 1.0))

    @pytest.mark.slow
    def test_ranks_track_pvalues(self):
        """Test rank error with k0 = ceil(sqrt(n)) shrinks with n on a standard normal sample."""
        results = verify_thm1(densities.gaussian_1d_spec(), [500, 1000, 2000, 4000], seed=1, repeats=10)
        errors = [error for _, error in results]

        assert sum(b > a for a, b in zip(errors, errors[1:])) <= 1
        assert errors[2] <= 0.12

    @pytest.mark.slow
    def test_wider_baseline_tracks_pvalues(self):
        """Test k0 = ceil(n^0.85) brings the rank error at n = 2000 within 0.05."""
        results = verify_thm1(
            densities.gaussian_1d_spec(), [500, 1000, 2000, 4000], seed=1, repeats=10, k0_exponent=0.85
        )
        errors = [error for _, error in results]

        assert sum(b > a for a, b in zip(errors, errors[1:])) <= 1
        assert errors[2] <= 0.05

    @pytest.mark.slow
    @pytest.mark.parametrize("lam", [0.2, 1.0])
    def test_uniform_cut_ratio(self, lam):
        """Test the ratio of scaled cuts at 0.3 and 0.5 matches the predicted ratio."""
        spec = densities.uniform_1d_spec()
        off_center = verify_thm2(spec, HyperplaneCut(axis=0, threshold=0.3), lam, [1000, 4000], seed=5)
        center = verify_thm2(spec, HyperplaneCut(axis=0, threshold=0.5), lam, [1000, 4000], seed=5)

        predicted_ratio = off_center.predicted / center.predicted
        for a, b in zip(off_center.empirical, center.empirical):
            assert a / b == pytest.approx(predicted_ratio, rel=0.25)

    @pytest.mark.slow
    def test_valley_cut_cheaper_for_small_lambda(self):
        """Test the scaled valley cut is smaller at lambda = 0.2 than at lambda = 1 in 9 of 10 seeds."""
        spec = densities.bimodal_1d_spec()
        cut = HyperplaneCut(axis=0, threshold=0.0)
        wins = 0
        for seed in range(10):
            low = verify_thm2(spec, cut, 0.2, [2000], seed=seed)
            high = verify_thm2(spec, cut, 1.0, [2000], seed=seed)
            wins += low.empirical[0] < high.empirical[0]
        assert wins >= 9
