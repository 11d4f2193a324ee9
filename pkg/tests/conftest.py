# tests/conftest.py
"""Shared test fixtures."""

import itertools
import tempfile
from pathlib import Path

import numpy as np
import pytest

from pcut.core.models import Dataset, GraphKind, GraphParams, SearchGrid
from pcut.graphs.base import Graph

UNIT_PARAMS = GraphParams(kind=GraphKind.KNN, k=1)


def make_graph(n, edges, weights=None):
    """Build a graph from (u, v) pairs, unit weights unless given."""
    u = [a for a, _ in edges]
    v = [b for _, b in edges]
    w = [1.0] * len(edges) if weights is None else weights
    return Graph.from_edges(n, u, v, w, UNIT_PARAMS)


def clique_edges(nodes):
    return list(itertools.combinations(nodes, 2))


@pytest.fixture
def graph_factory():
    """Factory for small hand-built graphs."""
    return make_graph


@pytest.fixture
def triangle():
    """Unit-weight triangle."""
    return make_graph(3, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def path3():
    """Path 0-1-2 with unit weights."""
    return make_graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def path4():
    """Path 0-1-2-3 with unit weights."""
    return make_graph(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def k4():
    """Complete graph on four nodes."""
    return make_graph(4, clique_edges(range(4)))


@pytest.fixture
def two_edges():
    """Two disjoint unit edges 0-1 and 2-3."""
    return make_graph(4, [(0, 1), (2, 3)])


@pytest.fixture
def two_triangles():
    """Two disjoint unit triangles {0,1,2} and {3,4,5}."""
    return make_graph(6, clique_edges(range(3)) + clique_edges(range(3, 6)))


@pytest.fixture
def two_cliques():
    """Disjoint unit-weight cliques of 12 and 8 nodes."""
    return make_graph(20, clique_edges(range(12)) + clique_edges(range(12, 20)))


@pytest.fixture
def bridged_cliques():
    """Cliques of 12 and 8 nodes joined by the single edge 11-12."""
    return make_graph(20, clique_edges(range(12)) + clique_edges(range(12, 20)) + [(11, 12)])


@pytest.fixture
def line3():
    """Collinear points 0, 1 and 3."""
    return Dataset(points=[0.0, 1.0, 3.0])


@pytest.fixture
def two_groups():
    """12 points near the origin and 8 points far to the right, labeled by group."""
    left = np.column_stack([np.arange(12) * 0.1, np.zeros(12)])
    right = np.column_stack([100.0 + np.arange(8) * 0.1, np.zeros(8)])
    labels = np.array([0] * 12 + [1] * 8)
    return Dataset(points=np.vstack([left, right]), true_labels=labels)


@pytest.fixture
def small_grid():
    """A reduced search grid that keeps selector tests fast."""
    return SearchGrid(lambdas=[0.0, 0.5, 1.0], ks=[3, 5], sigma_multipliers=[None, 1.0])


@pytest.fixture
def temp_dir():
    """Create a temporary output directory."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def points_csv(temp_dir):
    """Three 2-D points written without labels."""
    path = temp_dir / "points.csv"
    path.write_text("0,0\n1,1\n2,2\n", encoding="utf-8")
    return path
