"""Confusion-matrix rates, weighted accuracy, and empirical ROC/AUC.

Label 1 is the positive (minority) class throughout. Rates with zero
denominators raise UndefinedMetricError instead of returning sentinels:
silent zeros corrupt benchmark tables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, UndefinedMetricError


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ContractViolationError("confusion counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


def _as_binary(values, name: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ContractViolationError(f"{name} must be 1-D")
    arr = arr.astype(np.int64)
    if not np.isin(arr, (0, 1)).all():
        raise ContractViolationError(f"{name} must contain only 0 and 1")
    return arr


def confusion(true_labels, predicted_labels) -> ConfusionCounts:
    """Count tp/fp/tn/fn with label 1 as positive."""
    y = _as_binary(true_labels, "true_labels")
    yhat = _as_binary(predicted_labels, "predicted_labels")
    if len(y) != len(yhat):
        raise ContractViolationError(
            f"length mismatch: {len(y)} labels vs {len(yhat)} predictions"
        )
    return ConfusionCounts(
        tp=int(np.sum((y == 1) & (yhat == 1))),
        fp=int(np.sum((y == 0) & (yhat == 1))),
        tn=int(np.sum((y == 0) & (yhat == 0))),
        fn=int(np.sum((y == 1) & (yhat == 0))),
    )


def acc_plus(c: ConfusionCounts) -> float:
    """True positive rate TP/(TP+FN)."""
    if c.tp + c.fn == 0:
        raise UndefinedMetricError("acc_plus undefined: no positive examples")
    return c.tp / (c.tp + c.fn)


def acc_minus(c: ConfusionCounts) -> float:
    """True negative rate TN/(TN+FP)."""
    if c.tn + c.fp == 0:
        raise UndefinedMetricError("acc_minus undefined: no negative examples")
    return c.tn / (c.tn + c.fp)


def weighted_accuracy(c: ConfusionCounts, beta: float = 0.5) -> float:
    """beta * acc_minus + (1 - beta) * acc_plus; beta=0.5 is balanced accuracy."""
    if not 0.0 <= beta <= 1.0:
        raise ContractViolationError(f"beta must lie in [0, 1], got {beta}")
    return beta * acc_minus(c) + (1.0 - beta) * acc_plus(c)


def misclassification_error(c: ConfusionCounts) -> float:
    """(FP + FN) / total."""
    if c.total == 0:
        raise UndefinedMetricError("misclassification error undefined on empty input")
    return (c.fp + c.fn) / c.total


@dataclass(frozen=True)
class RocCurve:
    """Empirical ROC: one point per distinct score plus the (0,0) start.

    thresholds[i] is the score cut producing (fpr[i], tpr[i]) under the
    "predict 1 iff score >= threshold" rule; thresholds[0] is +inf.
    """

    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray

    def __post_init__(self):
        if not (len(self.fpr) == len(self.tpr) == len(self.thresholds)):
            raise ContractViolationError("ROC arrays must have equal lengths")

    @property
    def points(self) -> list:
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))


def _validate_scored(scores, true_labels):
    s = np.asarray(scores, dtype=np.float64)
    if s.ndim != 1:
        raise ContractViolationError("scores must be 1-D")
    if not np.all(np.isfinite(s)):
        raise ContractViolationError("scores must be finite")
    y = _as_binary(true_labels, "true_labels")
    if len(s) != len(y):
        raise ContractViolationError(f"length mismatch: {len(s)} scores vs {len(y)} labels")
    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("ROC/AUC undefined without both classes present")
    return s, y, n_pos, n_neg


def roc_curve(scores, true_labels) -> RocCurve:
    """Sweep thresholds at every distinct score, descending; ties grouped.

    The curve starts at (0,0) (threshold +inf) and ends at (1,1) (threshold
    = min score, everything predicted positive).
    """
    s, y, n_pos, n_neg = _validate_scored(scores, true_labels)
    order = np.argsort(-s, kind="stable")
    s_sorted = s[order]
    y_sorted = y[order]

    # Last index of each run of tied scores.
    is_group_end = np.ones(len(s_sorted), dtype=bool)
    is_group_end[:-1] = s_sorted[1:] != s_sorted[:-1]
    group_ends = np.flatnonzero(is_group_end)

    cum_tp = np.cumsum(y_sorted)[group_ends]
    cum_fp = (group_ends + 1) - cum_tp
    fpr = np.concatenate(([0.0], cum_fp / n_neg))
    tpr = np.concatenate(([0.0], cum_tp / n_pos))
    thresholds = np.concatenate(([np.inf], s_sorted[group_ends]))
    return RocCurve(fpr=fpr, tpr=tpr, thresholds=thresholds)


def trapezoid_area(curve: RocCurve) -> float:
    """Area under the ROC polyline by the trapezoid rule."""
    return float(np.trapezoid(curve.tpr, curve.fpr))


def auc(scores, true_labels) -> float:
    """Mann-Whitney AUC: P(score_pos > score_neg) + 0.5 * P(tie).

    Computed from average ranks, so ties get half credit. Equals the
    trapezoid area under roc_curve (the tests pin agreement to 1e-12).
    """
    s, y, n_pos, n_neg = _validate_scored(scores, true_labels)
    order = np.argsort(s, kind="stable")
    ranks = np.empty(len(s))
    s_sorted = s[order]
    # Average the 1-based ranks within each run of tied scores.
    i = 0
    while i < len(s_sorted):
        j = i
        while j + 1 < len(s_sorted) and s_sorted[j + 1] == s_sorted[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    rank_sum_pos = ranks[y == 1].sum()
    u_stat = rank_sum_pos - n_pos * (n_pos + 1) / 2.0
    return float(u_stat / (n_pos * n_neg))
