"""Dataset container, CSV ingestion, splitting, standardization, synthetic data.

Label convention: 1 is the minority/positive (fraud) class, 0 the majority.
Datasets are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, DataLoadError, SplitError
from .numerics import derive_stream

# Stream id used when an operation receives a bare integer seed.
SEED_STREAM_ID = 0


@dataclass(frozen=True)
class Dataset:
    """An (n x d) feature matrix with binary labels and feature names."""

    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]

    def __post_init__(self):
        # Snapshot the inputs; a Dataset never aliases caller-owned memory.
        feats = np.array(self.features, dtype=np.float64)
        labs = np.array(self.labels, dtype=np.int64)
        if feats.ndim != 2:
            raise ContractViolationError(f"features must be 2-D, got ndim={feats.ndim}")
        if feats.shape[1] < 1:
            raise ContractViolationError("a dataset needs at least one feature")
        if not np.all(np.isfinite(feats)):
            raise ContractViolationError("features contain NaN or Inf")
        if labs.shape != (feats.shape[0],):
            raise ContractViolationError(
                f"labels length {labs.shape} does not match {feats.shape[0]} rows"
            )
        if labs.size and not np.isin(labs, (0, 1)).all():
            raise ContractViolationError("labels must be 0 or 1")
        names = tuple(str(c) for c in self.feature_names)
        if len(names) != feats.shape[1]:
            raise ContractViolationError(
                f"{len(names)} feature names for {feats.shape[1]} columns"
            )
        feats.setflags(write=False)
        labs.setflags(write=False)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labs)
        object.__setattr__(self, "feature_names", names)

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_positive(self) -> int:
        return int(np.count_nonzero(self.labels == 1))

    @property
    def n_negative(self) -> int:
        return int(np.count_nonzero(self.labels == 0))

    def take_rows(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(self.features[idx], self.labels[idx], self.feature_names)

    def select_features(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=np.int64)
        names = tuple(self.feature_names[i] for i in idx)
        return Dataset(self.features[:, idx], self.labels, names)


def concat_rows(a: Dataset, b: Dataset) -> Dataset:
    """Stack two datasets over the same feature space."""
    if a.feature_names != b.feature_names:
        raise ContractViolationError("cannot concatenate datasets with different features")
    return Dataset(
        np.vstack([a.features, b.features]),
        np.concatenate([a.labels, b.labels]),
        a.feature_names,
    )


def split_by_class(ds: Dataset) -> tuple[Dataset, Dataset]:
    """Return (minority, majority) datasets, by label: 1 = minority."""
    pos = np.flatnonzero(ds.labels == 1)
    neg = np.flatnonzero(ds.labels == 0)
    return ds.take_rows(pos), ds.take_rows(neg)


@dataclass(frozen=True)
class SplitResult:
    train: Dataset
    test: Dataset


def stratified_split(ds: Dataset, train_fraction: float, seed: int) -> SplitResult:
    """Per-class split without replacement; the train share is floored.

    Each class contributes floor(train_fraction * class_count) rows to the
    training set; the remainder forms the test set.
    """
    if not (0.0 < train_fraction <= 1.0):
        raise SplitError(f"train_fraction must be in (0, 1], got {train_fraction}")
    pos = np.flatnonzero(ds.labels == 1)
    neg = np.flatnonzero(ds.labels == 0)
    if train_fraction < 1.0 and (len(pos) == 0 or len(neg) == 0):
        raise SplitError("both classes must be nonempty to split with train_fraction < 1")
    rng = derive_stream(seed, SEED_STREAM_ID)
    pos = pos[rng.permutation(len(pos))]
    neg = neg[rng.permutation(len(neg))]
    k_pos = math.floor(train_fraction * len(pos))
    k_neg = math.floor(train_fraction * len(neg))
    train_idx = np.concatenate([pos[:k_pos], neg[:k_neg]])
    test_idx = np.concatenate([pos[k_pos:], neg[k_neg:]])
    return SplitResult(train=ds.take_rows(train_idx), test=ds.take_rows(test_idx))


@dataclass(frozen=True)
class StandardizationParams:
    """Per-feature z-score parameters. Constant features carry stddev 1."""

    mean: np.ndarray
    stddev: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64)
        std = np.asarray(self.stddev, dtype=np.float64)
        if mean.shape != std.shape or mean.ndim != 1:
            raise ContractViolationError("mean/stddev must be 1-D and equal length")
        if np.any(std <= 0):
            raise ContractViolationError("stddev entries must be positive")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "stddev", std)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.mean) / self.stddev

    def inverse(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) * self.stddev + self.mean


def fit_standardizer(ds: Dataset) -> StandardizationParams:
    """Population (divide-by-n) z-score parameters fit on the given rows."""
    if ds.n_rows < 1:
        raise ContractViolationError("cannot fit a standardizer on an empty dataset")
    mean = ds.features.mean(axis=0)
    std = ds.features.std(axis=0)
    # Numerically constant columns get divisor 1 so they map to ~0.
    floor = 1e-12 * np.maximum(1.0, np.abs(mean))
    std = np.where(std <= floor, 1.0, std)
    return StandardizationParams(mean=mean, stddev=std)


def apply_standardizer(ds: Dataset, params: StandardizationParams) -> Dataset:
    return Dataset(params.transform(ds.features), ds.labels, ds.feature_names)


def invert_standardizer(ds: Dataset, params: StandardizationParams) -> Dataset:
    return Dataset(params.inverse(ds.features), ds.labels, ds.feature_names)


def generate_synthetic(
    n_majority: int,
    n_minority: int,
    d: int,
    class_separation: float,
    seed: int,
) -> Dataset:
    """Two spherical Gaussians: majority at the origin, minority at
    (class_separation, ..., class_separation). Majority rows come first."""
    if n_majority < 1 or n_minority < 1 or d < 1:
        raise ContractViolationError("counts and feature dimension must be >= 1")
    rng = derive_stream(seed, SEED_STREAM_ID)
    majority = rng.normal(0.0, 1.0, size=(n_majority, d))
    minority = rng.normal(0.0, 1.0, size=(n_minority, d)) + float(class_separation)
    features = np.vstack([majority, minority])
    labels = np.concatenate(
        [np.zeros(n_majority, dtype=np.int64), np.ones(n_minority, dtype=np.int64)]
    )
    names = tuple(f"f{j + 1}" for j in range(d))
    return Dataset(features, labels, names)


def subsample_dataset(
    ds: Dataset,
    n_majority: int | None,
    n_minority: int | None,
    seed: int,
) -> Dataset:
    """Per-class random subsample without replacement (None keeps a class whole)."""
    pos = np.flatnonzero(ds.labels == 1)
    neg = np.flatnonzero(ds.labels == 0)
    if n_minority is not None and n_minority > len(pos):
        raise SplitError(f"requested {n_minority} minority rows, only {len(pos)} present")
    if n_majority is not None and n_majority > len(neg):
        raise SplitError(f"requested {n_majority} majority rows, only {len(neg)} present")
    rng = derive_stream(seed, SEED_STREAM_ID)
    pos = pos[rng.permutation(len(pos))]
    neg = neg[rng.permutation(len(neg))]
    if n_minority is not None:
        pos = pos[:n_minority]
    if n_majority is not None:
        neg = neg[:n_majority]
    return ds.take_rows(np.concatenate([neg, pos]))


def load_csv(
    path,
    label_column: str,
    positive_label: str,
    drop_columns=(),
    categorical_columns=(),
) -> Dataset:
    """Load a UTF-8, comma-delimited, headered CSV into a Dataset.

    Categorical columns are one-hot expanded (one indicator per observed
    level, named ``column=level``); every other non-dropped, non-label
    column must parse as a number. Rows with missing or unparseable cells
    are rejected with an error naming the data row and column. The label is
    1 where the label cell equals ``positive_label``, else 0.
    """
    drop = set(drop_columns)
    categorical = list(categorical_columns)
    try:
        handle = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataLoadError(f"cannot open {path}: {exc}") from exc
    with handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataLoadError(f"{path}: file is empty, expected a header row") from None
        for col in [label_column, *drop, *categorical]:
            if col not in header:
                raise DataLoadError(f"{path}: column {col!r} not found in header")
        label_pos = header.index(label_column)
        numeric_cols = [
            (i, name)
            for i, name in enumerate(header)
            if name != label_column and name not in drop and name not in categorical
        ]
        cat_pos = {name: header.index(name) for name in categorical}
        if not numeric_cols and not categorical:
            raise DataLoadError(f"{path}: no feature columns left after drops")

        numeric_rows: list[tuple[float, ...]] = []
        cat_rows: dict[str, list[str]] = {name: [] for name in categorical}
        labels: list[int] = []
        for row_idx, row in enumerate(reader, start=1):
            if len(row) != len(header):
                raise DataLoadError(
                    f"{path}: row {row_idx} has {len(row)} cells, header has {len(header)}"
                )
            values = []
            for i, name in numeric_cols:
                cell = row[i].strip()
                if cell == "":
                    raise DataLoadError(
                        f"{path}: row {row_idx}, column {name!r}: missing value"
                    )
                try:
                    values.append(float(cell))
                except ValueError:
                    raise DataLoadError(
                        f"{path}: row {row_idx}, column {name!r}: "
                        f"cannot parse {cell!r} as a number"
                    ) from None
            for name in categorical:
                cell = row[cat_pos[name]].strip()
                if cell == "":
                    raise DataLoadError(
                        f"{path}: row {row_idx}, column {name!r}: missing value"
                    )
                cat_rows[name].append(cell)
            numeric_rows.append(tuple(values))
            labels.append(1 if row[label_pos].strip() == positive_label else 0)

    if not numeric_rows:
        raise DataLoadError(f"{path}: no data rows")

    blocks: list[np.ndarray] = []
    names: list[str] = []
    if numeric_cols:
        blocks.append(np.asarray(numeric_rows, dtype=np.float64))
        names.extend(name for _, name in numeric_cols)
    for col in categorical:
        levels = sorted(set(cat_rows[col]))
        level_index = {lev: j for j, lev in enumerate(levels)}
        onehot = np.zeros((len(labels), len(levels)), dtype=np.float64)
        for r, cell in enumerate(cat_rows[col]):
            onehot[r, level_index[cell]] = 1.0
        blocks.append(onehot)
        names.extend(f"{col}={lev}" for lev in levels)
    features = np.hstack(blocks)
    if not np.all(np.isfinite(features)):
        bad = np.argwhere(~np.isfinite(features))[0]
        raise DataLoadError(
            f"{path}: row {int(bad[0]) + 1}, column {names[int(bad[1])]!r}: non-finite value"
        )
    return Dataset(features, np.asarray(labels, dtype=np.int64), tuple(names))
