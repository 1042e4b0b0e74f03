"""Benchmark and sweep harness: train methods across seeds, time them,
score held-out splits, and serialize metric reports.

Wall-clock timing wraps training only (resampling + fitting); scoring and
I/O are excluded so sweep timings reflect model cost.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import time
from dataclasses import dataclass
from typing import Union

import yaml

from .data import (
    Dataset,
    generate_synthetic,
    load_csv,
    stratified_split,
)
from .dbn import DbnHyperparams
from .ensemble import (
    EnsembleModel,
    TrainConfig,
    classify,
    predict,
    train_baseline,
    train_deepbalance,
)
from .errors import ConfigError, DeepBalanceError
from .metrics import (
    RocCurve,
    acc_minus,
    acc_plus,
    auc,
    confusion,
    roc_curve,
    weighted_accuracy,
)
from .resampling import (
    BalancedBootstrap,
    NoResample,
    Oversample,
    ResampleMethod,
    Smote,
    Undersample,
    method_from_dict,
)

METRICS_COLUMNS = (
    "method",
    "acc_plus",
    "acc_minus",
    "balanced_accuracy",
    "auc",
    "threshold",
    "seed",
    "wall_time_seconds",
)


@dataclass(frozen=True)
class MetricsRow:
    method: str
    acc_plus: float
    acc_minus: float
    balanced_accuracy: float
    auc: float
    threshold: float
    seed: int
    wall_time_seconds: float

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in METRICS_COLUMNS}


@dataclass(frozen=True)
class DeepBalanceMethod:
    """A DeepBalance column in a benchmark table."""

    name: str = "deepbalance"
    mtry: int = 5
    total_nets: int = 25
    max_it: int = 50
    dbn_hyper: DbnHyperparams = DbnHyperparams()
    use_feature_sampling: bool = True
    aggregation: str = "mean"


@dataclass(frozen=True)
class BaselineMethod:
    """A single-DBN baseline column: resample once, train on all features."""

    name: str
    resample: ResampleMethod
    dbn_hyper: DbnHyperparams = DbnHyperparams(max_it=100)


MethodSpec = Union[DeepBalanceMethod, BaselineMethod]


def train_method(
    train: Dataset, method: MethodSpec, seed: int, workers: int = 1
) -> tuple:
    """Train one method; returns (model, wall_seconds) with timing around
    training only."""
    start = time.perf_counter()
    if isinstance(method, DeepBalanceMethod):
        config = TrainConfig(
            mtry=min(method.mtry, train.n_features),
            total_nets=method.total_nets,
            max_it=method.max_it,
            dbn_hyper=method.dbn_hyper,
            seed=seed,
            use_feature_sampling=method.use_feature_sampling,
            aggregation=method.aggregation,
        )
        model = train_deepbalance(train, config, workers=workers)
    else:
        model = train_baseline(train, method.resample, method.dbn_hyper, seed)
    return model, time.perf_counter() - start


def metrics_from_scores(
    method: str,
    scores,
    true_labels,
    threshold: float,
    seed: int,
    wall_time_seconds: float,
) -> MetricsRow:
    c = confusion(true_labels, classify(scores, threshold))
    return MetricsRow(
        method=method,
        acc_plus=acc_plus(c),
        acc_minus=acc_minus(c),
        balanced_accuracy=weighted_accuracy(c, 0.5),
        auc=auc(scores, true_labels),
        threshold=threshold,
        seed=seed,
        wall_time_seconds=wall_time_seconds,
    )


def _failed_row(method: str, threshold: float, seed: int) -> MetricsRow:
    nan = float("nan")
    return MetricsRow(method, nan, nan, nan, nan, threshold, seed, 0.0)


@dataclass(frozen=True)
class BenchmarkResult:
    rows: tuple
    summary: tuple
    roc_points: tuple
    errors: tuple

    @property
    def all_succeeded(self) -> bool:
        return len(self.errors) == 0


def _summarize(rows) -> tuple:
    """Per-method mean/stddev over seeds for each metric (failed rows skipped)."""
    by_method = {}
    for row in rows:
        if math.isnan(row.auc):
            continue
        by_method.setdefault(row.method, []).append(row)
    summary = []
    for method, group in by_method.items():
        entry = {"method": method, "n_seeds": len(group)}
        for metric in ("acc_plus", "acc_minus", "balanced_accuracy", "auc"):
            vals = [getattr(r, metric) for r in group]
            mean = sum(vals) / len(vals)
            var = (
                sum((v - mean) ** 2 for v in vals) / (len(vals) - 1)
                if len(vals) > 1
                else 0.0
            )
            entry[f"mean_{metric}"] = mean
            entry[f"sd_{metric}"] = math.sqrt(var)
        summary.append(entry)
    return tuple(summary)


def run_benchmark(
    data: Dataset,
    methods,
    seeds,
    split_fraction: float = 0.7,
    threshold: float = 0.5,
    workers: int = 1,
) -> BenchmarkResult:
    """Train every method on every seed's split and score the held-out part.

    Per-cell failures are recorded as NaN rows and collected in .errors;
    the remaining cells still run.
    """
    rows, roc_points, errors = [], [], []
    for seed in seeds:
        split = stratified_split(data, split_fraction, seed)
        for method in methods:
            try:
                model, wall = train_method(split.train, method, seed, workers)
                scores = predict(model, split.test.features)
                rows.append(
                    metrics_from_scores(
                        method.name, scores, split.test.labels, threshold, seed, wall
                    )
                )
                roc_points.append((method.name, seed, roc_curve(scores, split.test.labels)))
            except DeepBalanceError as exc:
                rows.append(_failed_row(method.name, threshold, seed))
                errors.append(f"{method.name} seed={seed}: {exc}")
    return BenchmarkResult(
        rows=tuple(rows),
        summary=_summarize(rows),
        roc_points=tuple(roc_points),
        errors=tuple(errors),
    )


SWEEP_PARAMETERS = ("mtry", "max_it", "total_nets")
SWEEP_COLUMNS = ("value", "mean_auc", "sd_auc", "mean_train_seconds")


@dataclass(frozen=True)
class SweepRow:
    value: int
    mean_auc: float
    sd_auc: float
    mean_train_seconds: float

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in SWEEP_COLUMNS}


def run_sweep(
    data: Dataset,
    base: DeepBalanceMethod,
    parameter: str,
    values,
    seeds,
    split_fraction: float = 0.7,
    threshold: float = 0.5,
    workers: int = 1,
) -> tuple:
    """Per parameter value: mean test AUC and mean training seconds over seeds."""
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigError(
            f"sweep parameter must be one of {SWEEP_PARAMETERS}, got {parameter!r}"
        )
    rows = []
    for value in values:
        method = dataclasses.replace(base, **{parameter: int(value)})
        aucs, times = [], []
        for seed in seeds:
            split = stratified_split(data, split_fraction, seed)
            model, wall = train_method(split.train, method, seed, workers)
            scores = predict(model, split.test.features)
            aucs.append(auc(scores, split.test.labels))
            times.append(wall)
        mean_auc = sum(aucs) / len(aucs)
        var = (
            sum((a - mean_auc) ** 2 for a in aucs) / (len(aucs) - 1)
            if len(aucs) > 1
            else 0.0
        )
        rows.append(
            SweepRow(
                value=int(value),
                mean_auc=mean_auc,
                sd_auc=math.sqrt(var),
                mean_train_seconds=sum(times) / len(times),
            )
        )
    return tuple(rows)


def write_metrics_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=METRICS_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row.to_dict())


def write_metrics_json(rows, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([row.to_dict() for row in rows], fh, indent=2)
        fh.write("\n")


def write_summary_csv(summary, path) -> None:
    if not summary:
        fields = ["method", "n_seeds"]
    else:
        fields = list(summary[0].keys())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for entry in summary:
            writer.writerow(entry)


def write_roc_csv(roc_points, path) -> None:
    """Rows (method, seed, threshold, fpr, tpr): plot-ready, no rendering here."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "seed", "threshold", "fpr", "tpr"])
        for method, seed, curve in roc_points:
            for t, f, tp in zip(curve.thresholds, curve.fpr, curve.tpr):
                writer.writerow([method, seed, t, f, tp])


def write_sweep_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row.to_dict())


# Dataset schema presets for the public fraud datasets used as benchmarks.
DATASET_PRESETS = {
    "creditcard": {
        "label_column": "Class",
        "positive_label": "1",
        "drop_columns": ("Time",),
        "categorical_columns": (),
    },
    "paysim": {
        "label_column": "isFraud",
        "positive_label": "1",
        # Account ids are unique per row (useless one-hot); isFlaggedFraud is
        # a rule output, not a feature.
        "drop_columns": ("nameOrig", "nameDest", "isFlaggedFraud"),
        "categorical_columns": ("type",),
    },
}


@dataclass(frozen=True)
class DatasetSource:
    """Where benchmark data comes from: a CSV on disk or the synthetic generator."""

    kind: str
    path: str = ""
    label_column: str = ""
    positive_label: str = "1"
    drop_columns: tuple = ()
    categorical_columns: tuple = ()
    n_majority: int = 10000
    n_minority: int = 100
    d: int = 10
    class_separation: float = 3.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("csv", "synthetic"):
            raise ConfigError(f"dataset kind must be 'csv' or 'synthetic', got {self.kind!r}")


def load_dataset(source: DatasetSource) -> Dataset:
    if source.kind == "synthetic":
        return generate_synthetic(
            n_majority=source.n_majority,
            n_minority=source.n_minority,
            d=source.d,
            class_separation=source.class_separation,
            seed=source.seed,
        )
    return load_csv(
        source.path,
        label_column=source.label_column,
        positive_label=source.positive_label,
        drop_columns=source.drop_columns,
        categorical_columns=source.categorical_columns,
    )


@dataclass(frozen=True)
class ExperimentSpec:
    dataset: DatasetSource
    methods: tuple
    split_fraction: float = 0.7
    threshold: float = 0.5
    seeds: tuple = (1,)
    workers: int = 1
    output: str = "out"

    def __post_init__(self):
        if len(self.methods) == 0:
            raise ConfigError("experiment spec needs at least one method")
        if len(self.seeds) == 0:
            raise ConfigError("experiment spec needs at least one seed")
        if not 0.0 < self.split_fraction < 1.0:
            raise ConfigError(
                f"split_fraction must lie in (0, 1), got {self.split_fraction}"
            )
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"threshold must lie in [0, 1], got {self.threshold}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")


_RESAMPLE_SHORTHAND = {
    "balanced_bootstrap": BalancedBootstrap,
    "undersample": Undersample,
    "oversample": Oversample,
    "smote": Smote,
    "none": NoResample,
}


def _parse_resample(value) -> ResampleMethod:
    if isinstance(value, str):
        if value not in _RESAMPLE_SHORTHAND:
            raise ConfigError(
                f"unknown resample method {value!r}; "
                f"expected one of {sorted(_RESAMPLE_SHORTHAND)}"
            )
        return _RESAMPLE_SHORTHAND[value]()
    if isinstance(value, dict):
        try:
            return method_from_dict(value)
        except (KeyError, DeepBalanceError) as exc:
            raise ConfigError(f"bad resample spec {value!r}: {exc}") from exc
    raise ConfigError(f"resample must be a tag or mapping, got {value!r}")


def _parse_hyper(d: dict, default: DbnHyperparams) -> DbnHyperparams:
    unknown = set(d) - set(f.name for f in dataclasses.fields(DbnHyperparams))
    if unknown:
        raise ConfigError(f"unknown dbn_hyper keys {sorted(unknown)}")
    if "hidden_sizes" in d:
        d = dict(d, hidden_sizes=tuple(d["hidden_sizes"]))
    return dataclasses.replace(default, **d)


def parse_method(entry: dict) -> MethodSpec:
    if not isinstance(entry, dict) or "kind" not in entry:
        raise ConfigError(f"method entries need a 'kind' key, got {entry!r}")
    kind = entry["kind"]
    if kind == "deepbalance":
        hyper = _parse_hyper(entry.get("dbn_hyper", {}), DbnHyperparams())
        return DeepBalanceMethod(
            name=entry.get("name", "deepbalance"),
            mtry=int(entry.get("mtry", 5)),
            total_nets=int(entry.get("total_nets", 25)),
            max_it=int(entry.get("max_it", 50)),
            dbn_hyper=hyper,
            use_feature_sampling=bool(entry.get("use_feature_sampling", True)),
            aggregation=entry.get("aggregation", "mean"),
        )
    if kind == "baseline":
        if "resample" not in entry:
            raise ConfigError(f"baseline method needs a 'resample' key: {entry!r}")
        resample = _parse_resample(entry["resample"])
        default = DbnHyperparams(max_it=int(entry.get("max_it", 100)))
        hyper = _parse_hyper(entry.get("dbn_hyper", {}), default)
        name = entry.get("name") or f"baseline-{entry['resample']}"
        return BaselineMethod(name=name, resample=resample, dbn_hyper=hyper)
    raise ConfigError(f"method kind must be 'deepbalance' or 'baseline', got {kind!r}")


def _parse_dataset(entry: dict) -> DatasetSource:
    if not isinstance(entry, dict):
        raise ConfigError("dataset section must be a mapping")
    if "synthetic" in entry:
        params = entry["synthetic"] or {}
        known = {"n_majority", "n_minority", "d", "class_separation", "seed"}
        unknown = set(params) - known
        if unknown:
            raise ConfigError(f"unknown synthetic keys {sorted(unknown)}")
        return DatasetSource(kind="synthetic", **{k: params[k] for k in params})
    if "csv" in entry:
        params = dict(entry["csv"] or {})
        preset_name = params.pop("preset", None)
        if preset_name is not None:
            if preset_name not in DATASET_PRESETS:
                raise ConfigError(
                    f"unknown dataset preset {preset_name!r}; "
                    f"expected one of {sorted(DATASET_PRESETS)}"
                )
            merged = dict(DATASET_PRESETS[preset_name])
            merged.update(params)
            params = merged
        if "path" not in params or "label_column" not in params:
            raise ConfigError("csv dataset needs 'path' and 'label_column' (or a preset)")
        return DatasetSource(
            kind="csv",
            path=str(params["path"]),
            label_column=str(params["label_column"]),
            positive_label=str(params.get("positive_label", "1")),
            drop_columns=tuple(params.get("drop_columns", ())),
            categorical_columns=tuple(params.get("categorical_columns", ())),
        )
    raise ConfigError("dataset section needs a 'csv' or 'synthetic' key")


def parse_experiment_spec(raw: dict) -> ExperimentSpec:
    if not isinstance(raw, dict):
        raise ConfigError("experiment spec must be a mapping")
    known = {"dataset", "methods", "split_fraction", "threshold", "seeds", "workers", "output"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown spec keys {sorted(unknown)}")
    if "dataset" not in raw or "methods" not in raw:
        raise ConfigError("experiment spec needs 'dataset' and 'methods' sections")
    methods = tuple(parse_method(m) for m in raw["methods"])
    return ExperimentSpec(
        dataset=_parse_dataset(raw["dataset"]),
        methods=methods,
        split_fraction=float(raw.get("split_fraction", 0.7)),
        threshold=float(raw.get("threshold", 0.5)),
        seeds=tuple(int(s) for s in raw.get("seeds", (1,))),
        workers=int(raw.get("workers", 1)),
        output=str(raw.get("output", "out")),
    )


def load_experiment_spec(path) -> ExperimentSpec:
    with open(path, "r", encoding="utf-8") as fh:
        raw = yaml.safe_load(fh)
    return parse_experiment_spec(raw)
