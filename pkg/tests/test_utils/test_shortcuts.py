# tests/test_utils/test_shortcuts.py
"""Tests for shortcut functions and settings."""

import numpy as np
import pytest
from pydantic import ValidationError

import pcut
from pcut.core.settings import PCutSettings
from pcut.utils import cluster_points, rank_points, ssl_points


class TestShortcuts:
    """Test cases for the array-in, array-out shortcuts."""

    def test_cluster_points(self, two_groups):
        """Test the far apart groups come back as the two clusters."""
        labels = cluster_points(two_groups.points, K=2, delta=0.05, seed=3, lambdas=[1.0], ks=[3], sigma_multipliers=[None])
        assert labels.tolist() == [0] * 12 + [1] * 8

    def test_ssl_points(self, two_groups):
        """Test seeds spread to their own group."""
        predicted = ssl_points(two_groups, {0: 1, 19: 0}, seed=1, lambdas=[1.0], ks=[3], sigma_multipliers=[None])
        assert predicted.tolist() == [1] * 12 + [0] * 8

    def test_rank_points(self):
        """Test ranks of points 0, 1 and 3."""
        assert rank_points(np.array([[0.0], [1.0], [3.0]]), k0=1).tolist() == pytest.approx([1.0, 1.0, 1 / 3])

    def test_lazy_exports(self):
        """Test top-level names resolve on first access."""
        assert pcut.rank_points is rank_points
        assert pcut.SearchGrid().lambdas[0] == 0.0
        with pytest.raises(AttributeError):
            pcut.not_a_name


class TestSettings:
    """Test cases for environment-driven settings."""

    def test_defaults(self):
        """Test the built-in defaults."""
        settings = PCutSettings()
        assert settings.delta == 0.05
        assert settings.dense_eigen_limit == 2000

    def test_environment(self, monkeypatch):
        """Test PCUT_ variables override the defaults."""
        monkeypatch.setenv("PCUT_SEED", "7")
        monkeypatch.setenv("PCUT_THREADS", "2")
        settings = PCutSettings()
        assert settings.seed == 7
        assert settings.threads == 2

    def test_invalid_delta(self, monkeypatch):
        """Test out-of-range values are rejected."""
        monkeypatch.setenv("PCUT_DELTA", "1.5")
        with pytest.raises(ValidationError):
            PCutSettings()
