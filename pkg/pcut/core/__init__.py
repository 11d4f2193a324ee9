# pcut/core/__init__.py
"""Core functionality for pcut."""

from pcut.core.models import Dataset, GraphKind, GraphParams, Mode, Objective, Partition, PCutReport, SearchGrid

_SELECTOR_NAMES = ("PCutSelector", "delta_sweep", "run_pcut")


def __getattr__(name):
    """Load the selector on first access; it imports the graph and data layers."""
    if name in _SELECTOR_NAMES:
        from pcut.core import selector

        return getattr(selector, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = [
    "Dataset",
    "GraphKind",
    "GraphParams",
    "Mode",
    "Objective",
    "PCutReport",
    "PCutSelector",
    "Partition",
    "SearchGrid",
    "delta_sweep",
    "run_pcut",
]
