# pcut/utils/__init__.py
"""Utility functions and shortcuts for pcut."""

from pcut.utils.shortcuts import cluster_points, rank_points, ssl_points

__all__ = [
    "cluster_points",
    "rank_points",
    "ssl_points",
]
