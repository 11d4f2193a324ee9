"""
Density evaluation for the synthetic specs.

Log-densities, axis marginals and sampling for Gaussian mixtures (diagonal
covariances) and uniform boxes, plus the named parameter sets of the experiments.
"""

from typing import Tuple

import numpy as np
from scipy import stats
from scipy.special import logsumexp

from pcut.core.models import DensitySpec, GaussianMixtureSpec, UniformSpec


def fig2_spec() -> GaussianMixtureSpec:
    """Imbalanced two-Gaussian mixture: 0.85 N([4.5,0], diag(2,1)) + 0.15 N([0,0], I)."""
    return GaussianMixtureSpec(
        weights=[0.85, 0.15],
        means=[[4.5, 0.0], [0.0, 0.0]],
        covariances=[[2.0, 1.0], [1.0, 1.0]],
    )


def fig5_spec() -> GaussianMixtureSpec:
    """One large and two small proximal Gaussians along x1, proportions 2:8:1."""
    return GaussianMixtureSpec.from_proportions(
        [2.0, 8.0, 1.0],
        means=[[-0.7, 0.0], [4.5, 0.0], [9.7, 0.0]],
        covariances=[[1.0, 1.0], [2.0, 1.0], [0.7, 0.7]],
    )


def gaussian_1d_spec() -> GaussianMixtureSpec:
    """Standard normal on the line."""
    return GaussianMixtureSpec(weights=[1.0], means=[[0.0]], covariances=[[1.0]])


def bimodal_1d_spec() -> GaussianMixtureSpec:
    """Two well separated unit Gaussians on the line with a valley at 0."""
    return GaussianMixtureSpec(weights=[0.5, 0.5], means=[[-2.5], [2.5]], covariances=[[1.0], [1.0]])


def uniform_1d_spec() -> UniformSpec:
    """Uniform density on [0, 1]."""
    return UniformSpec(low=[0.0], high=[1.0])


def _component_arrays(spec: GaussianMixtureSpec) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    return (
        np.asarray(spec.weights, dtype=np.float64),
        np.asarray(spec.means, dtype=np.float64),
        np.asarray(spec.covariances, dtype=np.float64),
    )


def log_pdf(spec: DensitySpec, x: np.ndarray) -> np.ndarray:
    """
    Log-density at each row of ``x``.

    Args:
        spec: Density specification
        x: m x d array (a 1-D array is read as m points when d = 1)

    Returns:
        Vector of m log-densities (-inf outside a uniform box)
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    if x.shape[1] != spec.dim and spec.dim == 1:
        x = x.reshape(-1, 1)
    if isinstance(spec, UniformSpec):
        low, high = np.asarray(spec.low), np.asarray(spec.high)
        inside = np.all((x >= low) & (x <= high), axis=1)
        return np.where(inside, -np.log(spec.volume), -np.inf)

    weights, means, covs = _component_arrays(spec)
    # m x c matrix of per-component log-densities
    per_component = np.stack(
        [stats.norm.logpdf(x, loc=means[j], scale=np.sqrt(covs[j])).sum(axis=1) for j in range(len(weights))],
        axis=1,
    )
    return logsumexp(per_component + np.log(weights), axis=1)


def pdf(spec: DensitySpec, x: np.ndarray) -> np.ndarray:
    """Density at each row of ``x``."""
    return np.exp(log_pdf(spec, x))


def marginal_cdf(spec: DensitySpec, axis: int, t: float) -> float:
    """Probability mass of {x : x[axis] <= t}."""
    if isinstance(spec, UniformSpec):
        lo, hi = spec.low[axis], spec.high[axis]
        return float(np.clip((t - lo) / (hi - lo), 0.0, 1.0))
    weights, means, covs = _component_arrays(spec)
    return float(np.sum(weights * stats.norm.cdf(t, loc=means[:, axis], scale=np.sqrt(covs[:, axis]))))


def sample(spec: DensitySpec, n: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """
    Draw n i.i.d. points.

    Returns:
        (points, component index per point); uniform boxes report component 0
    """
    if isinstance(spec, UniformSpec):
        points = rng.uniform(spec.low, spec.high, size=(n, spec.dim))
        return points, np.zeros(n, dtype=np.int64)
    weights, means, covs = _component_arrays(spec)
    components = rng.choice(len(weights), size=n, p=weights)
    noise = rng.standard_normal((n, spec.dim))
    points = means[components] + noise * np.sqrt(covs[components])
    return points, components.astype(np.int64)
