"""
Synthetic dataset generators.

Every generator draws from its own ``numpy.random.Generator`` (PCG64) seeded by
the caller, so equal (spec, n, seed) give bit-identical datasets on any platform.
"""

from typing import List, Sequence

import numpy as np
from loguru import logger

from pcut.core.exceptions import ParamError, TooFewPointsError
from pcut.core.models import Dataset, DensitySpec
from pcut.data import densities

MOON_PROPORTIONS = (0.45, 0.45, 0.10)
MOON_NOISE = 0.1
MOON_OFFSET = 0.5
BLOB_CENTER = (2.5, 0.5)
BLOB_VARIANCE = 0.1


def make_rng(seed: int) -> np.random.Generator:
    """The generator every seeded stream in pcut uses."""
    return np.random.Generator(np.random.PCG64(seed))


def largest_remainder_counts(n: int, proportions: Sequence[float]) -> List[int]:
    """
    Split n into integer counts proportional to ``proportions``.

    Floors first, then hands the leftover units to the largest fractional parts
    (ties to the lower index), so the counts always sum to n.

    Examples:
        >>> largest_remainder_counts(20, (0.45, 0.45, 0.10))
        [9, 9, 2]
    """
    shares = np.asarray(proportions, dtype=np.float64) * n / float(np.sum(proportions))
    counts = np.floor(shares).astype(np.int64)
    leftover = n - int(counts.sum())
    remainders = shares - counts
    for index in np.argsort(-remainders, kind="stable")[:leftover]:
        counts[index] += 1
    return counts.tolist()


def sample_density(spec: DensitySpec, n: int, seed: int) -> Dataset:
    """
    Draw n i.i.d. points from a density spec, recording the component as the label.

    Args:
        spec: Gaussian mixture or uniform box
        n: Number of points, at least 2
        seed: Seed of the random stream

    Raises:
        TooFewPointsError: If n < 2
    """
    if n < 2:
        raise TooFewPointsError(f"need at least 2 points, got {n}")
    points, labels = densities.sample(spec, n, make_rng(seed))
    return Dataset(points=points, true_labels=labels)


def sample_gaussian_mixture(spec: DensitySpec, n: int, seed: int) -> Dataset:
    """
    Draw n i.i.d. points from a Gaussian mixture.

    The component index of each draw is stored as its true label.

    Examples:
        >>> ds = sample_gaussian_mixture(densities.fig2_spec(), 1000, seed=7)
        >>> ds.n, ds.d
        (1000, 2)
    """
    dataset = sample_density(spec, n, seed)
    logger.debug(f"Sampled {n} points from a {len(getattr(spec, 'weights', [1]))}-component density")
    return dataset


def sample_two_moons_plus_gaussian(n: int, seed: int) -> Dataset:
    """
    Two interleaving half-circle moons plus a small Gaussian blob to their right.

    Counts follow 45% / 45% / 10% (largest remainder); labels are 0 and 1 for the
    moons and 2 for the blob.

    Raises:
        ParamError: If n < 3
    """
    if n < 3:
        raise ParamError(f"two moons plus a blob need at least 3 points, got {n}")
    rng = make_rng(seed)
    n_upper, n_lower, n_blob = largest_remainder_counts(n, MOON_PROPORTIONS)

    t_upper = rng.uniform(0.0, np.pi, n_upper)
    upper = np.column_stack([np.cos(t_upper), np.sin(t_upper)])
    t_lower = rng.uniform(0.0, np.pi, n_lower)
    lower = np.column_stack([1.0 - np.cos(t_lower), 1.0 - np.sin(t_lower) - MOON_OFFSET])
    moons = np.vstack([upper, lower]) + MOON_NOISE * rng.standard_normal((n_upper + n_lower, 2))

    blob = np.asarray(BLOB_CENTER) + np.sqrt(BLOB_VARIANCE) * rng.standard_normal((n_blob, 2))

    points = np.vstack([moons, blob])
    labels = np.concatenate(
        [np.zeros(n_upper, dtype=np.int64), np.ones(n_lower, dtype=np.int64), np.full(n_blob, 2, dtype=np.int64)]
    )
    return Dataset(points=points, true_labels=labels)


GENERATORS = ("fig2", "fig5", "moons")


def generate(name: str, n: int, seed: int) -> Dataset:
    """
    Build one of the named experiment datasets.

    Args:
        name: ``fig2``, ``fig5`` or ``moons``
        n: Number of points
        seed: Seed of the random stream

    Raises:
        ParamError: If the name is unknown
    """
    if name == "fig2":
        return sample_gaussian_mixture(densities.fig2_spec(), n, seed)
    if name == "fig5":
        return sample_gaussian_mixture(densities.fig5_spec(), n, seed)
    if name == "moons":
        return sample_two_moons_plus_gaussian(n, seed)
    raise ParamError(f"unknown generator '{name}', expected one of {', '.join(GENERATORS)}")
