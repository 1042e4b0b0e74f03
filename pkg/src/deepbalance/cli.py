"""Command-line front end: train, benchmark, sweep, gen-synth, evaluate.

Exit codes:
  0  all requested work succeeded
  1  partial failure (some benchmark cells failed; rows recorded as NaN)
  2  configuration or usage error (bad flags, bad spec)
  3  input error (missing or unreadable data/model files)
  4  training or internal failure

On any nonzero exit the last stderr line is a JSON object
{"error": <kind>, "message": <text>} for machine consumption.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np
import yaml

from .data import Dataset, generate_synthetic, load_csv, stratified_split
from .ensemble import load_ensemble, predict, save_ensemble
from .errors import (
    ConfigError,
    DataLoadError,
    DeepBalanceError,
)
from .experiment import (
    DATASET_PRESETS,
    SWEEP_PARAMETERS,
    DeepBalanceMethod,
    load_dataset,
    load_experiment_spec,
    metrics_from_scores,
    run_benchmark,
    run_sweep,
    train_method,
    write_metrics_csv,
    write_metrics_json,
    write_roc_csv,
    write_summary_csv,
    write_sweep_csv,
)
from .metrics import roc_curve

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_TRAINING = 4


class CliError(Exception):
    """Carries an exit code alongside the message."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load_spec(path):
    try:
        return load_experiment_spec(path)
    except FileNotFoundError:
        raise CliError(EXIT_INPUT, f"spec file not found: {path}")
    except yaml.YAMLError as exc:
        raise CliError(EXIT_CONFIG, f"spec file {path} is not valid YAML: {exc}")
    except ConfigError as exc:
        raise CliError(EXIT_CONFIG, f"bad spec {path}: {exc}")


def _apply_overrides(spec, args):
    import dataclasses

    updates = {}
    if args.seed is not None:
        updates["seeds"] = (args.seed,)
    if args.workers is not None:
        updates["workers"] = args.workers
    if getattr(args, "threshold", None) is not None:
        updates["threshold"] = args.threshold
    if args.out is not None:
        updates["output"] = args.out
    return dataclasses.replace(spec, **updates) if updates else spec


def _load_spec_dataset(spec):
    try:
        return load_dataset(spec.dataset)
    except FileNotFoundError:
        raise CliError(EXIT_INPUT, f"dataset file not found: {spec.dataset.path}")
    except DataLoadError as exc:
        raise CliError(EXIT_INPUT, str(exc))


def _ensure_outdir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def cmd_train(args) -> int:
    """Train the spec's first method on one seed; write model + metrics row."""
    spec = _apply_overrides(_load_spec(args.spec), args)
    data = _load_spec_dataset(spec)
    out = _ensure_outdir(spec.output)
    seed = spec.seeds[0]
    split = stratified_split(data, spec.split_fraction, seed)
    method = spec.methods[0]
    model, wall = train_method(split.train, method, seed, spec.workers)
    scores = predict(model, split.test.features)
    row = metrics_from_scores(
        method.name, scores, split.test.labels, spec.threshold, seed, wall
    )
    model_path = os.path.join(out, "model.json")
    save_ensemble(model, model_path)
    write_metrics_csv([row], os.path.join(out, "metrics.csv"))
    write_metrics_json([row], os.path.join(out, "metrics.json"))
    print(f"wrote {model_path}")
    print(
        f"{row.method}: acc+={row.acc_plus:.4f} acc-={row.acc_minus:.4f} "
        f"balanced={row.balanced_accuracy:.4f} auc={row.auc:.4f} "
        f"({row.wall_time_seconds:.1f}s)"
    )
    return EXIT_OK


def cmd_benchmark(args) -> int:
    """Method-by-seed comparison table on a held-out split."""
    spec = _apply_overrides(_load_spec(args.spec), args)
    if len(spec.methods) < 2:
        raise CliError(EXIT_CONFIG, "benchmark needs at least 2 methods in the spec")
    data = _load_spec_dataset(spec)
    out = _ensure_outdir(spec.output)
    result = run_benchmark(
        data,
        spec.methods,
        spec.seeds,
        split_fraction=spec.split_fraction,
        threshold=spec.threshold,
        workers=spec.workers,
    )
    write_metrics_csv(result.rows, os.path.join(out, "metrics.csv"))
    write_metrics_json(result.rows, os.path.join(out, "metrics.json"))
    write_summary_csv(result.summary, os.path.join(out, "summary.csv"))
    write_roc_csv(result.roc_points, os.path.join(out, "roc.csv"))
    for entry in result.summary:
        print(
            f"{entry['method']}: balanced={entry['mean_balanced_accuracy']:.4f} "
            f"(sd {entry['sd_balanced_accuracy']:.4f}) "
            f"auc={entry['mean_auc']:.4f} (sd {entry['sd_auc']:.4f}) "
            f"over {entry['n_seeds']} seed(s)"
        )
    if not result.all_succeeded:
        errors_path = os.path.join(out, "errors.json")
        with open(errors_path, "w", encoding="utf-8") as fh:
            json.dump(list(result.errors), fh, indent=2)
        raise CliError(
            EXIT_PARTIAL,
            f"{len(result.errors)} benchmark cell(s) failed; see {errors_path}",
        )
    return EXIT_OK


def cmd_sweep(args) -> int:
    """Sweep one parameter of the spec's DeepBalance method over given values."""
    spec = _apply_overrides(_load_spec(args.spec), args)
    base = next(
        (m for m in spec.methods if isinstance(m, DeepBalanceMethod)), None
    )
    if base is None:
        raise CliError(EXIT_CONFIG, "sweep needs a deepbalance method in the spec")
    try:
        values = [int(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise CliError(EXIT_CONFIG, f"--values must be comma-separated integers: {args.values!r}")
    if not values:
        raise CliError(EXIT_CONFIG, "--values is empty")
    data = _load_spec_dataset(spec)
    out = _ensure_outdir(spec.output)
    rows = run_sweep(
        data,
        base,
        args.parameter,
        values,
        spec.seeds,
        split_fraction=spec.split_fraction,
        threshold=spec.threshold,
        workers=spec.workers,
    )
    path = os.path.join(out, f"sweep_{args.parameter}.csv")
    write_sweep_csv(rows, path)
    for row in rows:
        print(
            f"{args.parameter}={row.value}: auc={row.mean_auc:.4f} "
            f"(sd {row.sd_auc:.4f}) train={row.mean_train_seconds:.2f}s"
        )
    print(f"wrote {path}")
    return EXIT_OK


def cmd_gen_synth(args) -> int:
    """Write a synthetic two-Gaussian dataset as CSV in the loader's format."""
    ds = generate_synthetic(
        n_majority=args.n_majority,
        n_minority=args.n_minority,
        d=args.d,
        class_separation=args.separation,
        seed=args.seed if args.seed is not None else 0,
    )
    out = args.out or "synthetic.csv"
    parent = os.path.dirname(out)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(",".join(list(ds.feature_names) + ["label"]) + "\n")
        for row, label in zip(ds.features, ds.labels):
            # repr(float) is the shortest decimal that round-trips exactly
            fh.write(",".join(repr(float(v)) for v in row) + f",{int(label)}\n")
    print(f"wrote {out} ({ds.n_rows} rows, {ds.n_positive} positive)")
    return EXIT_OK


def _align_features(ds: Dataset, feature_names) -> np.ndarray:
    """Reorder the dataset's columns to the model's feature order by name."""
    positions = {}
    for i, name in enumerate(ds.feature_names):
        positions[name] = i
    missing = [name for name in feature_names if name not in positions]
    if missing:
        raise DataLoadError(f"CSV is missing model features: {missing}")
    cols = [positions[name] for name in feature_names]
    return ds.features[:, cols]


def cmd_evaluate(args) -> int:
    """Score a saved model against a labeled CSV."""
    try:
        model = load_ensemble(args.model)
    except FileNotFoundError:
        raise CliError(EXIT_INPUT, f"model file not found: {args.model}")
    except (json.JSONDecodeError, KeyError, ConfigError) as exc:
        raise CliError(EXIT_INPUT, f"cannot read model {args.model}: {exc}")

    schema = {
        "label_column": args.label_column,
        "positive_label": args.positive_label,
        "drop_columns": tuple(_split_list(args.drop)),
        "categorical_columns": tuple(_split_list(args.categorical)),
    }
    if args.preset is not None:
        if args.preset not in DATASET_PRESETS:
            raise CliError(
                EXIT_CONFIG,
                f"unknown preset {args.preset!r}; expected one of {sorted(DATASET_PRESETS)}",
            )
        preset = DATASET_PRESETS[args.preset]
        for key, value in preset.items():
            if schema.get(key) in (None, ()):
                schema[key] = value
    if schema["label_column"] is None:
        raise CliError(EXIT_CONFIG, "evaluate needs --label-column or --preset")
    if schema["positive_label"] is None:
        schema["positive_label"] = "1"

    try:
        ds = load_csv(args.csv, **schema)
    except FileNotFoundError:
        raise CliError(EXIT_INPUT, f"dataset file not found: {args.csv}")
    except DataLoadError as exc:
        raise CliError(EXIT_INPUT, str(exc))

    X = _align_features(ds, model.feature_names)
    scores = predict(model, X)
    threshold = args.threshold if args.threshold is not None else 0.5
    name = os.path.splitext(os.path.basename(args.model))[0]
    row = metrics_from_scores(
        name, scores, ds.labels, threshold, args.seed if args.seed is not None else 0, 0.0
    )
    out = _ensure_outdir(args.out or "out")
    write_metrics_csv([row], os.path.join(out, "metrics.csv"))
    write_metrics_json([row], os.path.join(out, "metrics.json"))
    write_roc_csv([(name, row.seed, roc_curve(scores, ds.labels))], os.path.join(out, "roc.csv"))
    print(
        f"{name}: acc+={row.acc_plus:.4f} acc-={row.acc_minus:.4f} "
        f"balanced={row.balanced_accuracy:.4f} auc={row.auc:.4f}"
    )
    return EXIT_OK


def _split_list(value) -> list:
    if not value:
        return []
    return [part.strip() for part in value.split(",") if part.strip()]


def _add_common_flags(sp, spec_required: bool):
    if spec_required:
        sp.add_argument("--spec", required=True, help="YAML experiment spec file")
    sp.add_argument("--seed", type=int, default=None, help="override the spec's seed list")
    sp.add_argument("--workers", type=int, default=None, help="worker processes")
    sp.add_argument("--out", default=None, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deepbalance",
        description=(
            "Balanced-bootstrap DBN ensembles for imbalanced binary "
            "classification: train, benchmark, sweep, gen-synth, evaluate."
        ),
        epilog="Exit codes: 0 ok, 1 partial failure, 2 config error, 3 input error, 4 training error.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("train", help="train the spec's first method, save the model")
    _add_common_flags(sp, spec_required=True)
    sp.add_argument("--threshold", type=float, default=None)
    sp.set_defaults(func=cmd_train)

    sp = sub.add_parser("benchmark", help="compare the spec's methods across seeds")
    _add_common_flags(sp, spec_required=True)
    sp.add_argument("--threshold", type=float, default=None)
    sp.set_defaults(func=cmd_benchmark)

    sp = sub.add_parser("sweep", help="sweep mtry, max_it, or total_nets")
    _add_common_flags(sp, spec_required=True)
    sp.add_argument("--threshold", type=float, default=None)
    sp.add_argument("--parameter", required=True, choices=SWEEP_PARAMETERS)
    sp.add_argument("--values", required=True, help="comma-separated integer values")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("gen-synth", help="write a synthetic dataset CSV")
    sp.add_argument("--n-majority", type=int, default=10000)
    sp.add_argument("--n-minority", type=int, default=100)
    sp.add_argument("--d", type=int, default=10)
    sp.add_argument("--separation", type=float, default=3.0)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--workers", type=int, default=None, help="accepted for uniformity; unused")
    sp.add_argument("--out", default=None, help="output CSV path")
    sp.set_defaults(func=cmd_gen_synth)

    sp = sub.add_parser("evaluate", help="score a saved model against a labeled CSV")
    sp.add_argument("--model", required=True, help="ensemble JSON file")
    sp.add_argument("--csv", required=True, help="labeled dataset CSV")
    sp.add_argument("--label-column", default=None)
    sp.add_argument("--positive-label", default=None)
    sp.add_argument("--drop", default="", help="comma-separated columns to drop")
    sp.add_argument("--categorical", default="", help="comma-separated one-hot columns")
    sp.add_argument("--preset", default=None, help=f"schema preset: {sorted(DATASET_PRESETS)}")
    sp.add_argument("--threshold", type=float, default=None)
    sp.add_argument("--seed", type=int, default=None, help="seed tag for the metrics row")
    sp.add_argument("--workers", type=int, default=None, help="accepted for uniformity; unused")
    sp.add_argument("--out", default=None, help="output directory")
    sp.set_defaults(func=cmd_evaluate)
    return parser


_ERROR_KINDS = {
    EXIT_PARTIAL: "partial_failure",
    EXIT_CONFIG: "config_error",
    EXIT_INPUT: "input_error",
    EXIT_TRAINING: "training_error",
}


def _emit_error(code: int, message: str) -> None:
    print(message, file=sys.stderr)
    payload = {"error": _ERROR_KINDS.get(code, "error"), "message": message}
    print(json.dumps(payload), file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        _emit_error(exc.code, str(exc))
        return exc.code
    except ConfigError as exc:
        _emit_error(EXIT_CONFIG, str(exc))
        return EXIT_CONFIG
    except DataLoadError as exc:
        _emit_error(EXIT_INPUT, str(exc))
        return EXIT_INPUT
    except DeepBalanceError as exc:
        _emit_error(EXIT_TRAINING, str(exc))
        return EXIT_TRAINING


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
