"""
Runtime configuration for pcut.

Values are read from ``PCUT_*`` environment variables; CLI flags override them.
"""

from functools import lru_cache
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class PCutSettings(BaseSettings):
    """
    Global defaults for PCut runs.

    Attributes:
        seed: Seed every random stream derives from
        threads: Worker pool size for grid evaluation (None = available parallelism)
        delta: Minimum cluster-size fraction
        restarts: k-means restarts per spectral partition
        dense_eigen_limit: Largest n solved with the dense eigensolver
        eigen_tol: Tolerance of the iterative eigensolver
        eigen_maxiter: Iteration cap of the iterative eigensolver
        debug: Enable debug logging

    Examples:
        >>> import os
        >>> os.environ["PCUT_SEED"] = "7"
        >>> PCutSettings().seed
        7
    """

    model_config = SettingsConfigDict(env_prefix="PCUT_", extra="ignore")

    seed: int = 42
    threads: Optional[int] = Field(default=None, ge=1)
    delta: float = Field(default=0.05, gt=0.0, lt=1.0)
    restarts: int = Field(default=10, ge=1)
    dense_eigen_limit: int = Field(default=2000, ge=2)
    eigen_tol: float = Field(default=1e-9, gt=0.0)
    eigen_maxiter: int = Field(default=5000, ge=1)
    debug: bool = False


@lru_cache(maxsize=1)
def get_settings() -> PCutSettings:
    """Return the process-wide settings, read once from the environment."""
    return PCutSettings()
