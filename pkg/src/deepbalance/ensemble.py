"""Balanced-bootstrap ensembles of DBNs with random feature selection.

Each member m (1-based) owns RNG stream m derived from the config seed and
consumes it in a fixed order: bootstrap draw, feature draw, weight init,
batch shuffling. Members therefore never share random state, and the trained
ensemble is identical for any worker count.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from .data import Dataset, StandardizationParams, fit_standardizer, split_by_class
from .dbn import (
    DbnHyperparams,
    DbnModel,
    finetune,
    hyper_from_dict,
    hyper_to_dict,
    model_from_dict,
    model_to_dict,
    predict_proba,
    pretrain,
)
from .errors import ConfigError, ContractViolationError, TrainingError
from .numerics import RngStream, derive_stream, sigmoid
from .resampling import (
    BalancedBootstrap,
    NoResample,
    ResampleMethod,
    apply_method,
    balanced_bootstrap,
    method_from_dict,
    method_to_dict,
)

AGGREGATIONS = ("mean", "median")


@dataclass(frozen=True)
class TrainConfig:
    """Ensemble-level knobs. max_it here overrides dbn_hyper.max_it so the
    headline epoch count lives next to mtry and total_nets."""

    mtry: int = 5
    total_nets: int = 25
    max_it: int = 50
    dbn_hyper: DbnHyperparams = DbnHyperparams()
    seed: int = 0
    resample: ResampleMethod = BalancedBootstrap()
    use_feature_sampling: bool = True
    aggregation: str = "mean"

    def __post_init__(self):
        if self.mtry < 1:
            raise ConfigError(f"mtry must be >= 1, got {self.mtry}")
        if self.total_nets < 1:
            raise ConfigError(f"total_nets must be >= 1, got {self.total_nets}")
        if self.max_it < 1:
            raise ConfigError(f"max_it must be >= 1, got {self.max_it}")
        if self.aggregation not in AGGREGATIONS:
            raise ConfigError(
                f"aggregation must be one of {AGGREGATIONS}, got {self.aggregation!r}"
            )

    @property
    def effective_hyper(self) -> DbnHyperparams:
        return dataclasses.replace(self.dbn_hyper, max_it=self.max_it)


@dataclass(frozen=True)
class EnsembleMember:
    """One trained DBN plus the feature subset and scaling it was fit on."""

    model: DbnModel
    feature_indices: tuple
    standardizer: StandardizationParams

    def __post_init__(self):
        idx = tuple(int(i) for i in self.feature_indices)
        object.__setattr__(self, "feature_indices", idx)
        if len(idx) == 0:
            raise ContractViolationError("member needs at least one feature")
        if len(set(idx)) != len(idx) or list(idx) != sorted(idx):
            raise ContractViolationError("feature_indices must be sorted and distinct")
        if self.model.n_visible != len(idx):
            raise ContractViolationError(
                f"model expects {self.model.n_visible} inputs but member selects "
                f"{len(idx)} features"
            )


@dataclass(frozen=True)
class EnsembleModel:
    members: tuple
    feature_names: tuple
    config: TrainConfig

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        n = len(self.feature_names)
        for member in self.members:
            if any(i >= n for i in member.feature_indices):
                raise ContractViolationError("member feature index out of range")


def sample_features(feature_count: int, mtry: int, rng: RngStream) -> list:
    """mtry uniform draws WITH replacement, deduplicated and sorted.

    Result size is between 1 and mtry: duplicate draws collapse, so members
    see at most mtry distinct features.
    """
    if not 1 <= mtry <= feature_count:
        raise ConfigError(f"mtry must lie in [1, {feature_count}], got {mtry}")
    draws = rng.integers(0, feature_count, size=mtry)
    return [int(i) for i in np.unique(draws)]


def member_inputs(member: EnsembleMember, X: np.ndarray) -> np.ndarray:
    """Restrict to the member's features, standardize, squash into (0,1)."""
    sub = X[:, member.feature_indices]
    return sigmoid(member.standardizer.transform(sub))


def _train_member(
    member_index: int,
    minority: Dataset,
    majority: Dataset,
    mtry: int,
    use_feature_sampling: bool,
    hyper: DbnHyperparams,
    seed: int,
) -> EnsembleMember:
    rng = derive_stream(seed, member_index)
    boot = balanced_bootstrap(minority, majority, rng)
    if use_feature_sampling:
        idx = sample_features(boot.n_features, mtry, rng)
    else:
        idx = list(range(boot.n_features))
    sub = boot.select_features(idx)
    standardizer = fit_standardizer(sub)
    squashed = sigmoid(standardizer.transform(sub.features))
    model = pretrain(hyper, squashed, rng)
    finetune(model, squashed, sub.labels.astype(np.float64), hyper, rng)
    return EnsembleMember(model=model, feature_indices=tuple(idx), standardizer=standardizer)


def train_deepbalance(train: Dataset, config: TrainConfig, workers: int = 1) -> EnsembleModel:
    """Train total_nets DBNs on balanced bootstraps with sampled features.

    Member results are collected into member-index order, so the trained
    ensemble does not depend on scheduling or worker count.
    """
    if train.n_positive == 0 or train.n_negative == 0:
        raise TrainingError("training data must contain both classes")
    if config.mtry > train.n_features:
        raise ConfigError(
            f"mtry={config.mtry} exceeds feature count {train.n_features}"
        )
    minority, majority = split_by_class(train)
    hyper = config.effective_hyper
    args = [
        (m, minority, majority, config.mtry, config.use_feature_sampling, hyper, config.seed)
        for m in range(1, config.total_nets + 1)
    ]
    if workers == 1:
        members = [_train_member(*a) for a in args]
    else:
        members = Parallel(n_jobs=workers, backend="loky")(
            delayed(_train_member)(*a) for a in args
        )
    return EnsembleModel(members=tuple(members), feature_names=train.feature_names, config=config)


def train_baseline(
    train: Dataset,
    method: ResampleMethod,
    dbn_hyper: DbnHyperparams,
    seed: int,
) -> EnsembleModel:
    """Resample once (or not, for NoResample), then train one all-features DBN.

    Wrapped as a single-member EnsembleModel so evaluation code handles
    ensembles and baselines uniformly.
    """
    if train.n_positive == 0 or train.n_negative == 0:
        raise TrainingError("training data must contain both classes")
    rng = derive_stream(seed, 1)
    resampled = apply_method(train, method, rng)
    standardizer = fit_standardizer(resampled)
    squashed = sigmoid(standardizer.transform(resampled.features))
    model = pretrain(dbn_hyper, squashed, rng)
    finetune(model, squashed, resampled.labels.astype(np.float64), dbn_hyper, rng)
    member = EnsembleMember(
        model=model,
        feature_indices=tuple(range(train.n_features)),
        standardizer=standardizer,
    )
    config = TrainConfig(
        mtry=train.n_features,
        total_nets=1,
        max_it=dbn_hyper.max_it,
        dbn_hyper=dbn_hyper,
        seed=seed,
        resample=method,
        use_feature_sampling=False,
    )
    return EnsembleModel(members=(member,), feature_names=train.feature_names, config=config)


def predict(ensemble: EnsembleModel, X: np.ndarray) -> np.ndarray:
    """Aggregate member probabilities per row (mean by default)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != len(ensemble.feature_names):
        raise ContractViolationError(
            f"predict: expected {len(ensemble.feature_names)} columns, "
            f"got shape {X.shape}"
        )
    scores = np.stack(
        [predict_proba(m.model, member_inputs(m, X)) for m in ensemble.members]
    )
    if ensemble.config.aggregation == "median":
        return np.median(scores, axis=0)
    return scores.mean(axis=0)


def classify(scores: np.ndarray, threshold: float = 0.5) -> np.ndarray:
    """Label 1 iff score >= threshold."""
    scores = np.asarray(scores, dtype=np.float64)
    if not 0.0 <= threshold <= 1.0:
        raise ContractViolationError(f"threshold must lie in [0, 1], got {threshold}")
    if np.any(scores < 0.0) or np.any(scores > 1.0):
        raise ContractViolationError("scores must lie in [0, 1]")
    return (scores >= threshold).astype(np.int64)


ENSEMBLE_FORMAT_VERSION = "deepbalance-ensemble/1"


def config_to_dict(config: TrainConfig) -> dict:
    return {
        "mtry": config.mtry,
        "total_nets": config.total_nets,
        "max_it": config.max_it,
        "dbn_hyper": hyper_to_dict(config.dbn_hyper),
        "seed": config.seed,
        "resample": method_to_dict(config.resample),
        "use_feature_sampling": config.use_feature_sampling,
        "aggregation": config.aggregation,
    }


def config_from_dict(d: dict) -> TrainConfig:
    return TrainConfig(
        mtry=int(d["mtry"]),
        total_nets=int(d["total_nets"]),
        max_it=int(d["max_it"]),
        dbn_hyper=hyper_from_dict(d["dbn_hyper"]),
        seed=int(d["seed"]),
        resample=method_from_dict(d["resample"]),
        use_feature_sampling=bool(d["use_feature_sampling"]),
        aggregation=d.get("aggregation", "mean"),
    )


def ensemble_to_dict(ensemble: EnsembleModel) -> dict:
    return {
        "format": ENSEMBLE_FORMAT_VERSION,
        "feature_names": list(ensemble.feature_names),
        "config": config_to_dict(ensemble.config),
        "members": [
            {
                "model": model_to_dict(m.model),
                "feature_indices": list(m.feature_indices),
                "standardizer": {
                    "mean": m.standardizer.mean.tolist(),
                    "stddev": m.standardizer.stddev.tolist(),
                },
            }
            for m in ensemble.members
        ],
    }


def ensemble_from_dict(d: dict) -> EnsembleModel:
    if d.get("format") != ENSEMBLE_FORMAT_VERSION:
        raise ConfigError(f"unsupported ensemble format {d.get('format')!r}")
    members = tuple(
        EnsembleMember(
            model=model_from_dict(entry["model"]),
            feature_indices=tuple(entry["feature_indices"]),
            standardizer=StandardizationParams(
                mean=np.asarray(entry["standardizer"]["mean"], dtype=np.float64),
                stddev=np.asarray(entry["standardizer"]["stddev"], dtype=np.float64),
            ),
        )
        for entry in d["members"]
    )
    return EnsembleModel(
        members=members,
        feature_names=tuple(d["feature_names"]),
        config=config_from_dict(d["config"]),
    )


def serialize_ensemble(ensemble: EnsembleModel) -> str:
    """Canonical JSON text: sorted keys, repr-exact floats."""
    return json.dumps(ensemble_to_dict(ensemble), sort_keys=True)


def save_ensemble(ensemble: EnsembleModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_ensemble(ensemble))
        fh.write("\n")


def load_ensemble(path) -> EnsembleModel:
    with open(path, "r", encoding="utf-8") as fh:
        return ensemble_from_dict(json.load(fh))
