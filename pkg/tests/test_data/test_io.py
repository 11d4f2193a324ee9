# tests/test_data/test_io.py
"""Tests for CSV ingestion and writers."""

import numpy as np
import pytest

from pcut.core.exceptions import DataError, ParseError, TooFewPointsError
from pcut.core.models import Dataset, LabelMask, Partition
from pcut.data.io import (
    load_csv,
    load_label_mask,
    sample_label_mask,
    save_csv,
    save_label_mask,
    save_partition_csv,
    write_rows,
)


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadCsv:
    """Test cases for dataset loading."""

    def test_plain_points(self, points_csv):
        """Test three unlabeled 2-D points."""
        ds = load_csv(points_csv)
        assert ds.points.tolist() == [[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]
        assert ds.true_labels is None

    def test_labels_and_header(self, temp_dir):
        """Test the last column as labels below a header line."""
        path = write(temp_dir / "labeled.csv", "x,y,label\n0.5,1,0\n2,3,1\n\n4,5,1\n")
        ds = load_csv(path, has_labels=True, header=True)

        assert ds.n == 3
        assert ds.points[0].tolist() == [0.5, 1.0]
        assert ds.true_labels.tolist() == [0, 1, 1]

    def test_non_numeric_cell(self, temp_dir):
        """Test the failing row is reported."""
        path = write(temp_dir / "bad.csv", "0,0\n1,abc\n")
        with pytest.raises(ParseError) as exc_info:
            load_csv(path)
        assert exc_info.value.row == 2

    def test_ragged_rows(self, temp_dir):
        """Test rows must share one width."""
        path = write(temp_dir / "ragged.csv", "0,0\n1,1\n2\n")
        with pytest.raises(ParseError) as exc_info:
            load_csv(path)
        assert exc_info.value.row == 3

    def test_bad_label(self, temp_dir):
        """Test labels must be non-negative integers."""
        path = write(temp_dir / "labels.csv", "0,0,1\n1,1,0.5\n")
        with pytest.raises(ParseError):
            load_csv(path, has_labels=True)

    def test_too_few_points(self, temp_dir):
        """Test a single row."""
        with pytest.raises(TooFewPointsError):
            load_csv(write(temp_dir / "one.csv", "1,2\n"))

    def test_missing_file(self, temp_dir):
        """Test a path that does not exist."""
        with pytest.raises(FileNotFoundError):
            load_csv(temp_dir / "missing.csv")

    def test_save_is_exact(self, temp_dir):
        """Test saved coordinates load back bit for bit."""
        ds = Dataset(points=np.random.default_rng(4).normal(size=(5, 3)), true_labels=[0, 1, 0, 2, 1])
        loaded = load_csv(save_csv(ds, temp_dir / "ds.csv"), has_labels=True)

        assert np.array_equal(loaded.points, ds.points)
        assert loaded.true_labels.tolist() == [0, 1, 0, 2, 1]


class TestLabelMasks:
    """Test cases for label mask files."""

    def test_load_with_header(self, temp_dir):
        """Test an "id,class" header is detected and skipped."""
        mask = load_label_mask(write(temp_dir / "mask.csv", "id,class\n3,1\n0,0\n"))
        assert mask.labels == {0: 0, 3: 1}

    def test_duplicate_id(self, temp_dir):
        """Test an id labeled twice."""
        with pytest.raises(ParseError) as exc_info:
            load_label_mask(write(temp_dir / "mask.csv", "1,0\n1,1\n"))
        assert exc_info.value.row == 2

    def test_malformed(self, temp_dir):
        """Test wrong column counts, non-integers and empty files."""
        with pytest.raises(ParseError):
            load_label_mask(write(temp_dir / "a.csv", "1,0,2\n"))
        with pytest.raises(ParseError):
            load_label_mask(write(temp_dir / "b.csv", "1,x\n"))
        with pytest.raises(ParseError):
            load_label_mask(write(temp_dir / "c.csv", ""))

    def test_save(self, temp_dir):
        """Test the written file lists ids in order."""
        path = save_label_mask(LabelMask(labels={4: 1, 2: 0}), temp_dir / "labels.csv")
        assert path.read_text(encoding="utf-8") == "id,class\n2,0\n4,1\n"


class TestSampleLabelMask:
    """Test cases for random seed selection."""

    @pytest.fixture
    def dataset(self):
        labels = [0] * 10 + [1] * 5 + [2] * 2
        return Dataset(points=np.arange(17, dtype=float), true_labels=labels)

    def test_covers_every_class(self, dataset):
        """Test one seed per class at least and the requested total."""
        mask = sample_label_mask(dataset, 5, seed=0)

        assert len(mask.labels) == 5
        assert set(mask.labels.values()) == {0, 1, 2}
        for node, label in mask.labels.items():
            assert dataset.true_labels[node] == label

    def test_deterministic(self, dataset):
        """Test equal seeds give equal masks."""
        assert sample_label_mask(dataset, 6, seed=3).labels == sample_label_mask(dataset, 6, seed=3).labels

    def test_capped_at_n(self, dataset):
        """Test asking for more seeds than points labels everything."""
        assert len(sample_label_mask(dataset, 50, seed=1).labels) == 17

    def test_errors(self, dataset):
        """Test missing labels and too few seeds."""
        with pytest.raises(DataError):
            sample_label_mask(Dataset(points=[0.0, 1.0]), 2, seed=0)
        with pytest.raises(DataError):
            sample_label_mask(dataset, 2, seed=0)


class TestWriters:
    """Test cases for partition and row writers."""

    def test_partition_csv(self, temp_dir):
        """Test "id,cluster" rows."""
        path = save_partition_csv(Partition(assignment=[1, 0, 1], K=2), temp_dir / "partition.csv")
        assert path.read_text(encoding="utf-8") == "id,cluster\n0,1\n1,0\n2,1\n"

    def test_write_rows(self, temp_dir):
        """Test a header and mixed cells."""
        path = write_rows(temp_dir / "rows.csv", ["t", "value"], [[0.5, 1.25], [1.0, ""]])
        assert path.read_text(encoding="utf-8") == "t,value\n0.5,1.25\n1.0,\n"
