"""
pcut - Partition-constrained minimum cuts on rank-modulated graphs.

This package builds a family of rank modulated degree (RMD) graphs, generates
candidate partitions with spectral clustering or label propagation, and selects
the candidate with the smallest baseline cut whose clusters all reach a minimum size.
"""

import os

__version__ = "0.3.0"

_logger_initialized = False

_SHORTCUTS = ("cluster_points", "rank_points", "ssl_points")
_SELECTOR = ("PCutSelector", "run_pcut", "delta_sweep")


def _init_logger():
    """Initialize logger only when needed."""
    global _logger_initialized
    if _logger_initialized:
        return

    if os.getenv("PCUT_DEBUG"):
        from loguru import logger
        from rich.console import Console
        from rich.logging import RichHandler

        logger.remove()
        logger.add(
            RichHandler(console=Console(stderr=True), rich_tracebacks=True),
            format="{message}",
            level="DEBUG",
        )
    else:
        import sys

        from loguru import logger

        logger.remove()
        logger.add(sys.stderr, level="WARNING")

    _logger_initialized = True


def __getattr__(name):
    """Lazy load attributes on demand."""
    if name in _SHORTCUTS:
        _init_logger()
        from pcut.utils import shortcuts

        return getattr(shortcuts, name)

    if name in _SELECTOR:
        _init_logger()
        from pcut.core import selector

        return getattr(selector, name)

    if name in ("Dataset", "Partition", "SearchGrid", "PCutReport"):
        from pcut.core import models

        return getattr(models, name)

    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = [
    "Dataset",
    "PCutReport",
    "PCutSelector",
    "Partition",
    "SearchGrid",
    "cluster_points",
    "delta_sweep",
    "rank_points",
    "run_pcut",
    "ssl_points",
]
