import numpy as np
import pytest

from conftest import pairwise_auc

from deepbalance.errors import ContractViolationError, UndefinedMetricError
from deepbalance.metrics import (
    ConfusionCounts,
    acc_minus,
    acc_plus,
    auc,
    confusion,
    misclassification_error,
    roc_curve,
    trapezoid_area,
    weighted_accuracy,
)


def test_confusion_counts_from_labels():
    true = np.array([1, 1, 1, 0, 0, 0, 0])
    pred = np.array([1, 0, 1, 0, 1, 0, 0])
    c = confusion(true, pred)
    assert (c.tp, c.fn, c.tn, c.fp) == (2, 1, 3, 1)
    assert c.total == 7


def test_confusion_contracts():
    with pytest.raises(ContractViolationError):
        confusion([0, 1], [0, 1, 1])
    with pytest.raises(ContractViolationError):
        confusion([0, 2], [0, 1])
    with pytest.raises(ContractViolationError):
        ConfusionCounts(tp=-1, fp=0, tn=0, fn=0)


def test_per_class_accuracy_arithmetic():
    c = ConfusionCounts(tp=2, fp=0, tn=0, fn=2)
    assert acc_plus(c) == 0.5
    c = ConfusionCounts(tp=0, fp=3, tn=97, fn=0)
    assert acc_minus(c) == 0.97


def test_per_class_accuracy_undefined():
    no_pos = ConfusionCounts(tp=0, fp=1, tn=4, fn=0)
    with pytest.raises(UndefinedMetricError):
        acc_plus(no_pos)
    no_neg = ConfusionCounts(tp=3, fp=0, tn=0, fn=1)
    with pytest.raises(UndefinedMetricError):
        acc_minus(no_neg)


def test_weighted_accuracy_blends_class_accuracies():
    # tp=9060, fn=2022 -> acc+ = 0.81755...; tn=9946, fp=54 -> acc- = 0.9946
    c = ConfusionCounts(tp=9060, fp=54, tn=9946, fn=2022)
    expected = 0.5 * (acc_plus(c) + acc_minus(c))
    assert abs(weighted_accuracy(c) - expected) < 1e-12
    assert weighted_accuracy(c, beta=1.0) == acc_minus(c)
    assert weighted_accuracy(c, beta=0.0) == acc_plus(c)
    c2 = ConfusionCounts(tp=7618, fp=598, tn=9402, fn=2382)
    assert abs(weighted_accuracy(c2) - 0.5 * (0.7618 + 0.9402)) < 1e-12


def test_weighted_accuracy_beta_range():
    c = ConfusionCounts(tp=1, fp=1, tn=1, fn=1)
    with pytest.raises(ContractViolationError):
        weighted_accuracy(c, beta=1.5)


def test_misclassification_error_ignores_class_balance():
    """A model that never predicts the positive class still looks good on
    plain error when negatives dominate: 12 of 17 right is under 30% error
    while missing every single positive."""
    c = ConfusionCounts(tp=0, fp=0, tn=12, fn=5)
    assert abs(misclassification_error(c) - 5 / 17) < 1e-15
    assert acc_plus(c) == 0.0
    with pytest.raises(UndefinedMetricError):
        misclassification_error(ConfusionCounts(0, 0, 0, 0))


def test_roc_perfect_separation():
    # one point per distinct score: both positives clear before any negative
    curve = roc_curve([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1])
    assert curve.fpr.tolist() == [0.0, 0.0, 0.0, 0.5, 1.0]
    assert curve.tpr.tolist() == [0.0, 0.5, 1.0, 1.0, 1.0]
    assert np.isinf(curve.thresholds[0])
    assert trapezoid_area(curve) == 1.0


def test_roc_all_scores_tied():
    curve = roc_curve([0.5, 0.5, 0.5, 0.5], [0, 1, 0, 1])
    assert curve.fpr.tolist() == [0.0, 1.0]
    assert curve.tpr.tolist() == [0.0, 1.0]
    assert trapezoid_area(curve) == 0.5


def test_roc_hand_enumerated_curve():
    """Six distinct scores: sweeping the threshold passes one point per
    score. Enumerated by hand: positives at ranks 1, 2, 4."""
    scores = [0.9, 0.8, 0.7, 0.6, 0.5, 0.4]
    labels = [1, 1, 0, 1, 0, 0]
    curve = roc_curve(scores, labels)
    expected = [
        (0.0, 0.0),
        (0.0, 1 / 3),
        (0.0, 2 / 3),
        (1 / 3, 2 / 3),
        (1 / 3, 1.0),
        (2 / 3, 1.0),
        (1.0, 1.0),
    ]
    assert np.allclose(curve.points, expected, atol=1e-15)
    assert abs(trapezoid_area(curve) - 8 / 9) < 1e-15
    assert abs(auc(scores, labels) - 8 / 9) < 1e-15
    # thresholds start at +inf then track the sorted scores
    assert np.isinf(curve.thresholds[0])
    assert curve.thresholds[1:].tolist() == sorted(scores, reverse=True)


def test_roc_groups_tied_scores_into_single_steps():
    # ties must move diagonally in one step, not stairstep through them
    curve = roc_curve([0.7, 0.7, 0.7, 0.2], [1, 0, 1, 0])
    assert curve.fpr.tolist() == [0.0, 0.5, 1.0]
    assert curve.tpr.tolist() == [0.0, 1.0, 1.0]
    assert abs(trapezoid_area(curve) - 0.75) < 1e-15


def test_auc_equals_pairwise_win_rate():
    rng = np.random.default_rng(12)
    for _ in range(40):
        n = int(rng.integers(4, 30))
        labels = rng.integers(0, 2, size=n)
        if labels.min() == labels.max():
            labels[0] = 1 - labels[0]
        # quantized scores force plenty of exact ties
        scores = np.round(rng.uniform(size=n), 1)
        got = auc(scores, labels)
        want = pairwise_auc(scores, labels)
        assert abs(got - want) < 1e-12
        assert abs(trapezoid_area(roc_curve(scores, labels)) - want) < 1e-12


def test_auc_invariant_under_monotone_transforms():
    rng = np.random.default_rng(13)
    scores = rng.uniform(size=25)
    labels = rng.integers(0, 2, size=25)
    labels[0], labels[1] = 0, 1
    base = auc(scores, labels)
    assert abs(auc(2.0 * scores + 1.0, labels) - base) < 1e-12
    assert abs(auc(scores**3, labels) - base) < 1e-12


def test_auc_complement_identity():
    rng = np.random.default_rng(14)
    scores = rng.uniform(size=30)
    labels = rng.integers(0, 2, size=30)
    labels[0], labels[1] = 0, 1
    assert abs(auc(scores, labels) + auc(-scores, labels) - 1.0) < 1e-12


def test_roc_auc_single_class_undefined():
    with pytest.raises(UndefinedMetricError):
        roc_curve([0.1, 0.2], [1, 1])
    with pytest.raises(UndefinedMetricError):
        auc([0.1, 0.2], [0, 0])


def test_roc_score_validation():
    with pytest.raises(ContractViolationError):
        roc_curve([0.1, np.nan], [0, 1])
    with pytest.raises(ContractViolationError):
        roc_curve([[0.1, 0.2]], [0, 1])
    with pytest.raises(ContractViolationError):
        auc([0.1, 0.2, 0.3], [0, 1])
