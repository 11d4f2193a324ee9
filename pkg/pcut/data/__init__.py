"""Datasets: CSV ingestion, densities and synthetic generators."""

from pcut.data.generators import generate, sample_gaussian_mixture, sample_two_moons_plus_gaussian
from pcut.data.io import load_csv, load_label_mask, sample_label_mask, save_csv, save_partition_csv

__all__ = [
    "generate",
    "load_csv",
    "load_label_mask",
    "sample_gaussian_mixture",
    "sample_label_mask",
    "sample_two_moons_plus_gaussian",
    "save_csv",
    "save_partition_csv",
]
