"""Balanced bootstrap and baseline resamplers (undersample, oversample, SMOTE).

All resamplers are pure functions of (data, RngStream): the same stream
always reproduces the same resample, so they are safe to call concurrently
with distinct streams. Output row order is pinned: minority rows first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .data import Dataset, concat_rows, fit_standardizer, split_by_class
from .errors import ResampleError
from .numerics import RngStream


@dataclass(frozen=True)
class BalancedBootstrap:
    """Keep all minority rows, draw as many majority rows with replacement."""


@dataclass(frozen=True)
class Undersample:
    """Keep all minority rows, draw as many majority rows without replacement."""


@dataclass(frozen=True)
class Oversample:
    """Draw target_count rows with replacement from each class."""

    target_count: int = 1000

    def __post_init__(self):
        if self.target_count < 1:
            raise ResampleError(f"oversample target_count must be >= 1, got {self.target_count}")


@dataclass(frozen=True)
class Smote:
    """Interpolated minority synthesis plus majority downsampling."""

    k_neighbors: int = 5
    amount_multiplier: int = 2

    def __post_init__(self):
        if self.k_neighbors < 1:
            raise ResampleError(f"smote k_neighbors must be >= 1, got {self.k_neighbors}")
        if self.amount_multiplier < 1:
            raise ResampleError(
                f"smote amount_multiplier must be >= 1, got {self.amount_multiplier}"
            )


@dataclass(frozen=True)
class NoResample:
    """Train on the data as-is."""


ResampleMethod = Union[BalancedBootstrap, Undersample, Oversample, Smote, NoResample]

_METHOD_TAGS = {
    BalancedBootstrap: "balanced_bootstrap",
    Undersample: "undersample",
    Oversample: "oversample",
    Smote: "smote",
    NoResample: "none",
}


def method_tag(method: ResampleMethod) -> str:
    return _METHOD_TAGS[type(method)]


def method_to_dict(method: ResampleMethod) -> dict:
    out = {"tag": method_tag(method)}
    if isinstance(method, Oversample):
        out["target_count"] = method.target_count
    elif isinstance(method, Smote):
        out["k_neighbors"] = method.k_neighbors
        out["amount_multiplier"] = method.amount_multiplier
    return out


def method_from_dict(d: dict) -> ResampleMethod:
    tag = d["tag"]
    if tag == "balanced_bootstrap":
        return BalancedBootstrap()
    if tag == "undersample":
        return Undersample()
    if tag == "oversample":
        return Oversample(target_count=int(d["target_count"]))
    if tag == "smote":
        return Smote(
            k_neighbors=int(d["k_neighbors"]),
            amount_multiplier=int(d["amount_multiplier"]),
        )
    if tag == "none":
        return NoResample()
    raise ResampleError(f"unknown resample method tag {tag!r}")


def balanced_bootstrap(minority: Dataset, majority: Dataset, rng: RngStream) -> Dataset:
    """All minority rows plus |minority| majority rows drawn with replacement.

    The output has exactly 2*|minority| rows at 50% positive prevalence, and
    the minority block is passed through unchanged.
    """
    if minority.n_rows == 0 or majority.n_rows == 0:
        raise ResampleError("balanced_bootstrap needs nonempty minority and majority sets")
    draws = rng.integers(0, majority.n_rows, size=minority.n_rows)
    return concat_rows(minority, majority.take_rows(draws))


def random_undersample(train: Dataset, rng: RngStream) -> Dataset:
    """All minority rows plus |minority| majority rows drawn without replacement."""
    minority, majority = split_by_class(train)
    if minority.n_rows == 0 or majority.n_rows == 0:
        raise ResampleError("random_undersample needs both classes nonempty")
    if majority.n_rows < minority.n_rows:
        raise ResampleError(
            f"cannot undersample {minority.n_rows} majority rows without replacement "
            f"from {majority.n_rows}"
        )
    keep = rng.permutation(majority.n_rows)[: minority.n_rows]
    return concat_rows(minority, majority.take_rows(keep))


def random_oversample(train: Dataset, x: int, rng: RngStream) -> Dataset:
    """x rows with replacement from each class; every output row copies an input row."""
    if x < 1:
        raise ResampleError(f"oversample count must be >= 1, got {x}")
    minority, majority = split_by_class(train)
    if minority.n_rows == 0 or majority.n_rows == 0:
        raise ResampleError("random_oversample needs both classes nonempty")
    pos_draws = rng.integers(0, minority.n_rows, size=x)
    neg_draws = rng.integers(0, majority.n_rows, size=x)
    return concat_rows(minority.take_rows(pos_draws), majority.take_rows(neg_draws))


def smote(train: Dataset, k: int, amount_multiplier: int, rng: RngStream) -> Dataset:
    """SMOTE: synthesize minority rows on segments to k-nearest minority
    neighbors, then downsample the majority to the augmented minority count.

    Neighbor search uses Euclidean distance on standardized features (fit on
    the full input set); interpolation happens in the original feature space.
    For each minority row p, ``amount_multiplier`` synthetics p + u*(q - p)
    are drawn, with q uniform over p's k nearest minority neighbors and
    u ~ Uniform(0, 1). k is capped at |minority| - 1; neighbor-distance ties
    break by row index.
    """
    if k < 1:
        raise ResampleError(f"smote k must be >= 1, got {k}")
    if amount_multiplier < 1:
        raise ResampleError(f"smote amount_multiplier must be >= 1, got {amount_multiplier}")
    minority, majority = split_by_class(train)
    if minority.n_rows < 2:
        raise ResampleError("smote needs at least 2 minority rows to find neighbors")
    if majority.n_rows == 0:
        raise ResampleError("smote needs a nonempty majority class")

    params = fit_standardizer(train)
    z = params.transform(minority.features)
    sq = ((z[:, None, :] - z[None, :, :]) ** 2).sum(axis=-1)
    np.fill_diagonal(sq, np.inf)
    k_eff = min(k, minority.n_rows - 1)
    neighbors = np.argsort(sq, axis=1, kind="stable")[:, :k_eff]

    raw = minority.features
    synthetic = np.empty((minority.n_rows * amount_multiplier, raw.shape[1]))
    row = 0
    for i in range(minority.n_rows):
        for _ in range(amount_multiplier):
            q = neighbors[i, int(rng.integers(0, k_eff))]
            u = float(rng.uniform())
            synthetic[row] = raw[i] + u * (raw[q] - raw[i])
            row += 1
    synthetic_ds = Dataset(
        synthetic, np.ones(len(synthetic), dtype=np.int64), train.feature_names
    )
    augmented = concat_rows(minority, synthetic_ds)

    n_keep = min(majority.n_rows, augmented.n_rows)
    keep = rng.permutation(majority.n_rows)[:n_keep]
    return concat_rows(augmented, majority.take_rows(keep))


def apply_method(train: Dataset, method: ResampleMethod, rng: RngStream) -> Dataset:
    """Dispatch a ResampleMethod value to its resampler."""
    if isinstance(method, BalancedBootstrap):
        minority, majority = split_by_class(train)
        return balanced_bootstrap(minority, majority, rng)
    if isinstance(method, Undersample):
        return random_undersample(train, rng)
    if isinstance(method, Oversample):
        return random_oversample(train, method.target_count, rng)
    if isinstance(method, Smote):
        return smote(train, method.k_neighbors, method.amount_multiplier, rng)
    if isinstance(method, NoResample):
        return train
    raise ResampleError(f"unknown resample method {method!r}")
