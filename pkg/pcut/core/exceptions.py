"""
Custom exceptions for pcut.

This module defines all custom exceptions and warnings used throughout the package.
"""

from typing import TYPE_CHECKING, Any, Optional

if TYPE_CHECKING:
    from pcut.core.models import PCutReport


class PCutError(Exception):
    """Base exception for all pcut errors."""

    pass


class ParseError(PCutError):
    """Raised when an input file cannot be parsed."""

    def __init__(self, message: str, row: Optional[int] = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class TooFewPointsError(PCutError):
    """Raised when a dataset has fewer than two points."""

    pass


class SpecError(PCutError):
    """Raised when a density specification is inconsistent."""

    pass


class ParamError(PCutError):
    """Raised when an operation receives parameters outside its domain."""

    pass


class ShapeError(PCutError):
    """Raised when a partition does not match the graph it is evaluated on."""

    pass


class IsolatedNodeError(PCutError):
    """Raised when a node without neighbours is met where neighbours are required."""

    def __init__(self, node: int):
        self.node = node
        super().__init__(f"node {node} has no neighbours on the baseline graph")


class NumericalError(PCutError):
    """Raised when an eigensolver, linear solve or quadrature fails."""

    pass


class DataError(PCutError):
    """Raised when a dataset lacks what an evaluation needs (e.g. true labels)."""

    pass


class NoFeasiblePartitionError(PCutError):
    """Raised when no candidate partition satisfies the minimum cluster size."""

    def __init__(self, message: str, report: Optional["PCutReport"] = None, **context: Any):
        self.report = report
        self.context = context
        super().__init__(message)


class EmptyGraphWarning(UserWarning):
    """Emitted when a graph construction produces no edges."""

    pass
