"""
CSV ingestion and artifact writers.

Datasets are UTF-8, comma-separated, one point per row with an optional
trailing integer label. Label masks and partitions are "id,class" and
"id,cluster" files.
"""

import csv
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from loguru import logger

from pcut.core.exceptions import DataError, ParseError, TooFewPointsError
from pcut.core.models import Dataset, LabelMask, Partition
from pcut.data.generators import make_rng

PathLike = Union[str, Path]


def _parse_float(cell: str, row: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ParseError(f"non-numeric cell {cell.strip()!r}", row=row) from None


def load_csv(path: PathLike, has_labels: bool = False, header: bool = False) -> Dataset:
    """
    Load a dataset from a CSV file.

    Args:
        path: File to read
        has_labels: Whether the last column is an integer class label
        header: Skip the first line

    Returns:
        Dataset with one point per non-empty row

    Raises:
        FileNotFoundError: If the file does not exist
        ParseError: On ragged rows or non-numeric cells (row numbers are 1-based file lines)
        TooFewPointsError: If fewer than two rows remain

    Examples:
        >>> ds = load_csv("points.csv")
        >>> ds = load_csv("labeled.csv", has_labels=True, header=True)
    """
    path = Path(path)
    points: List[List[float]] = []
    labels: List[int] = []
    width: Optional[int] = None

    with open(path, "r", encoding="utf-8", newline="") as f:
        for row_number, row in enumerate(csv.reader(f), start=1):
            if header and row_number == 1:
                continue
            if not row or all(not cell.strip() for cell in row):
                continue
            if width is None:
                width = len(row)
                if has_labels and width < 2:
                    raise ParseError("labeled rows need at least one coordinate and a label", row=row_number)
            elif len(row) != width:
                raise ParseError(f"expected {width} columns, found {len(row)}", row=row_number)

            values = [_parse_float(cell, row_number) for cell in row]
            if has_labels:
                label = values.pop()
                if label != int(label) or label < 0:
                    raise ParseError(f"label {row[-1].strip()!r} is not a non-negative integer", row=row_number)
                labels.append(int(label))
            points.append(values)

    if len(points) < 2:
        raise TooFewPointsError(f"{path} holds {len(points)} points, at least 2 are required")

    logger.debug(f"Loaded {len(points)} points of dimension {len(points[0])} from {path}")
    return Dataset(points=np.asarray(points), true_labels=np.asarray(labels) if has_labels else None)


def save_csv(dataset: Dataset, path: PathLike, include_labels: bool = True) -> Path:
    """
    Write a dataset as CSV with 17 significant digits, so loading it back is exact.

    Labels are appended as a final column when present and ``include_labels``.
    """
    path = Path(path)
    with_labels = include_labels and dataset.true_labels is not None
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        for i, point in enumerate(dataset.points):
            row = [format(value, ".17g") for value in point]
            if with_labels:
                row.append(str(int(dataset.true_labels[i])))
            writer.writerow(row)
    return path


def load_label_mask(path: PathLike, header: bool = False) -> LabelMask:
    """
    Load seed labels from an "id,class" CSV file.

    Raises:
        ParseError: If a row is not two integers, or an id repeats
    """
    labels: Dict[int, int] = {}
    with open(Path(path), "r", encoding="utf-8", newline="") as f:
        for row_number, row in enumerate(csv.reader(f), start=1):
            if row_number == 1 and (header or (row and row[0].strip().lower() == "id")):
                continue
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 2:
                raise ParseError(f"expected 'id,class', found {len(row)} columns", row=row_number)
            try:
                node, label = int(row[0]), int(row[1])
            except ValueError:
                raise ParseError("id and class must be integers", row=row_number) from None
            if node in labels:
                raise ParseError(f"id {node} labeled twice", row=row_number)
            labels[node] = label
    if not labels:
        raise ParseError("label mask file is empty")
    return LabelMask(labels=labels)


def save_label_mask(mask: LabelMask, path: PathLike) -> Path:
    """Write a label mask as "id,class" rows."""
    return _write_pairs(path, ("id", "class"), mask.labels.items())


def sample_label_mask(dataset: Dataset, n_labeled: int, seed: int) -> LabelMask:
    """
    Pick ``n_labeled`` random seeds with at least one from every class.

    One seed is drawn per class first, the rest uniformly from the remaining nodes.

    Raises:
        DataError: If the dataset has no true labels or n_labeled < number of classes
    """
    if dataset.true_labels is None:
        raise DataError("random label masks need a dataset with true labels")
    classes = np.unique(dataset.true_labels)
    if n_labeled < len(classes):
        raise DataError(f"{n_labeled} seeds cannot cover {len(classes)} classes")
    n_labeled = min(n_labeled, dataset.n)

    rng = make_rng(seed)
    chosen = [int(rng.choice(np.flatnonzero(dataset.true_labels == c))) for c in classes]
    rest = np.setdiff1d(dataset.ids, chosen)
    chosen.extend(int(i) for i in rng.choice(rest, size=n_labeled - len(chosen), replace=False))
    return LabelMask(labels={i: int(dataset.true_labels[i]) for i in chosen})


def save_partition_csv(partition: Partition, path: PathLike) -> Path:
    """Write a partition as "id,cluster" rows."""
    return _write_pairs(path, ("id", "cluster"), enumerate(partition.assignment.tolist()))


def write_rows(path: PathLike, header: Sequence[str], rows: Sequence[Sequence[object]]) -> Path:
    """Write a header line and rows as CSV."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def _write_pairs(path: PathLike, header: Sequence[str], pairs) -> Path:
    return write_rows(path, header, [(int(a), int(b)) for a, b in pairs])
