"""Dataset loading, missing-value imputation and optional feature scaling."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class DatasetError(Exception):
    """Raised when a dataset file cannot be parsed."""


@dataclass
class Dataset:
    name: str
    features: np.ndarray
    labels: np.ndarray
    imputed_cells: list[tuple[int, int]] = field(default_factory=list)

    @property
    def n_instances(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return int(np.unique(self.labels).size)


def _sniff_delimiter(sample: str) -> str:
    try:
        return csv.Sniffer().sniff(sample, delimiters=",;\t ").delimiter
    except csv.Error:
        return ","


def _cell_is_numeric(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _impute_value(seed: int, row: int, col: int, low: float, high: float) -> float:
    # keyed per cell so values do not depend on processing order
    rng = np.random.default_rng(np.random.SeedSequence([seed, row, col]))
    return float(rng.uniform(low, high))


def load_dataset(path, label_column, missing_token: str = "?",
                 seed: int = 0, name: str | None = None) -> Dataset:
    """Load a delimited text file into features and labels.

    ``label_column`` is a header name (requires a header row) or a 0-based
    column index (header auto-detected). Cells equal to ``missing_token`` are
    imputed with a seeded uniform draw from the observed range of their
    column and recorded in ``imputed_cells``.
    """
    path = Path(path)
    text = path.read_text()
    rows = [r for r in csv.reader(text.splitlines(), delimiter=_sniff_delimiter(text[:2048]))
            if any(cell.strip() for cell in r)]
    if not rows:
        raise DatasetError(f"{path}: empty file")

    header = None
    if isinstance(label_column, str):
        header = [c.strip() for c in rows[0]]
        if label_column not in header:
            raise DatasetError(f"{path}: no column named {label_column!r} in header")
        label_idx = header.index(label_column)
        rows = rows[1:]
    else:
        label_idx = int(label_column)
        first = [c.strip() for c in rows[0]]
        non_label = [c for i, c in enumerate(first) if i != label_idx % len(first)]
        if any(not (_cell_is_numeric(c) or c == missing_token) for c in non_label):
            rows = rows[1:]  # header row
    if not rows:
        raise DatasetError(f"{path}: no data rows")

    n_cols = len(rows[0])
    label_idx %= n_cols
    feature_idx = [i for i in range(n_cols) if i != label_idx]
    labels = []
    raw = np.empty((len(rows), len(feature_idx)))
    missing: list[tuple[int, int]] = []
    for r, row in enumerate(rows):
        if len(row) != n_cols:
            raise DatasetError(f"{path}: row {r} has {len(row)} columns, expected {n_cols}")
        labels.append(row[label_idx].strip())
        for c, i in enumerate(feature_idx):
            cell = row[i].strip()
            if cell == missing_token:
                raw[r, c] = np.nan
                missing.append((r, c))
            elif _cell_is_numeric(cell):
                raw[r, c] = float(cell)
                if not np.isfinite(raw[r, c]):
                    raise DatasetError(f"{path}: non-finite value at row {r}, column {i}")
            else:
                raise DatasetError(f"{path}: unparseable cell {cell!r} at row {r}, column {i}")

    for r, c in missing:
        column = raw[:, c]
        observed = column[np.isfinite(column)]
        if observed.size == 0:
            raise DatasetError(f"{path}: feature column {c} has no observed values")
        raw[r, c] = _impute_value(seed, r, c, observed.min(), observed.max())

    return Dataset(name=name or path.stem, features=raw,
                   labels=np.asarray(labels), imputed_cells=missing)


def minmax_scale(features: np.ndarray) -> np.ndarray:
    """Scale each feature to [0, 1]; constant columns map to 0."""
    lo = features.min(axis=0)
    span = features.max(axis=0) - lo
    span[span == 0] = 1.0
    return (features - lo) / span


def standard_scale(features: np.ndarray) -> np.ndarray:
    """Z-score each feature; constant columns map to 0."""
    std = features.std(axis=0)
    std[std == 0] = 1.0
    return (features - features.mean(axis=0)) / std


SCALERS = {"none": lambda x: x, "minmax": minmax_scale, "standard": standard_scale}


def builtin_dataset(name: str) -> Dataset:
    """Benchmark datasets bundled with scikit-learn (iris, wine)."""
    from sklearn import datasets as skd

    loaders = {"iris": skd.load_iris, "wine": skd.load_wine}
    if name not in loaders:
        raise DatasetError(f"no builtin dataset {name!r}; available: {sorted(loaders)}")
    bunch = loaders[name]()
    labels = np.asarray([bunch.target_names[t] for t in bunch.target])
    return Dataset(name=name, features=np.asarray(bunch.data, dtype=float), labels=labels)


def write_csv(dataset: Dataset, path, label_column: str = "class") -> None:
    """Materialize a dataset as a headered CSV (features then the label column)."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{i}" for i in range(dataset.n_features)] + [label_column])
        for feats, label in zip(dataset.features, dataset.labels):
            writer.writerow([repr(float(v)) for v in feats] + [str(label)])
