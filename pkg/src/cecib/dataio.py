"""Dataset container, CSV ingestion and PCA preprocessing."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import ConfigurationError, CsvParseError
from .partitions import SideInfo


@dataclass
class Dataset:
    """An n x dims feature matrix with optional column names."""

    values: np.ndarray
    feature_names: list | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim == 1:
            self.values = self.values.reshape(-1, 1)
        if self.values.ndim != 2:
            raise ValueError("values must be a 2-d matrix")
        if self.values.size and not np.isfinite(self.values).all():
            raise ValueError("dataset contains non-finite values")
        if self.feature_names is not None and len(self.feature_names) != self.dims:
            raise ValueError("one feature name per column is required")

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def dims(self) -> int:
        return self.values.shape[1]


def load_csv(path, label_column: str | None = None) -> tuple[Dataset, SideInfo]:
    """Read a comma-separated file with a header row.

    All columns except the optional label column must be numeric. Label
    values are arbitrary strings mapped to category indices in order of
    first appearance; an empty cell means the row is unlabeled.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvParseError(f"{path}: file is empty, a header row is required")
        header = [name.strip() for name in header]
        label_index = None
        if label_column is not None:
            if label_column not in header:
                raise ConfigurationError(
                    f"{path}: no column named {label_column!r} in header {header}"
                )
            label_index = header.index(label_column)
        feature_names = [name for j, name in enumerate(header) if j != label_index]
        if not feature_names:
            raise CsvParseError(f"{path}: no feature columns besides the label column")

        values = []
        raw_labels = []
        for row_number, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise CsvParseError(
                    f"{path}: row {row_number} has {len(row)} cells, expected {len(header)}"
                )
            feature_row = []
            for j, cell in enumerate(row):
                if j == label_index:
                    raw_labels.append(cell.strip())
                    continue
                try:
                    feature_row.append(float(cell))
                except ValueError:
                    raise CsvParseError(
                        f"{path}: row {row_number}, column {header[j]!r}: "
                        f"cannot parse {cell!r} as a number"
                    ) from None
            values.append(feature_row)

    if not values:
        raise CsvParseError(f"{path}: no data rows")
    data = Dataset(values=np.asarray(values, dtype=float), feature_names=feature_names)

    labels = np.full(data.rows, -1, dtype=np.int64)
    categories: dict[str, int] = {}
    if label_index is not None:
        for i, cell in enumerate(raw_labels):
            if cell == "":
                continue
            if cell not in categories:
                categories[cell] = len(categories)
            labels[i] = categories[cell]
    side = SideInfo(labels=labels, m=len(categories))
    return data, side


def pca_basis(values, d: int):
    """Centered top-d principal directions with a deterministic sign.

    Returns (mean, components, eigenvalues) where components has shape
    (d, dims), rows ordered by descending eigenvalue, and each row's
    largest-magnitude entry is positive.
    """
    x = np.asarray(values, dtype=float)
    n, dims = x.shape
    if not 1 <= d <= dims:
        raise ConfigurationError(f"cannot keep {d} components of {dims}-d data")
    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / n
    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    order = np.argsort(eigenvalues)[::-1][:d]
    components = eigenvectors[:, order].T.copy()
    eigenvalues = eigenvalues[order]
    for row in components:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    return mean, components, eigenvalues


def pca_reduce(data: Dataset, d: int) -> Dataset:
    """Project onto the top-d principal components of the sample covariance."""
    mean, components, _ = pca_basis(data.values, d)
    projected = (data.values - mean) @ components.T
    names = [f"pc{j + 1}" for j in range(d)]
    return Dataset(values=projected, feature_names=names)
