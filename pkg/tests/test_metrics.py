import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from readmit.errors import DataError
from readmit.metrics import ConfusionMatrix, auprc, confusion, pr_curve, precision, recall


def test_confusion_basic():
    cm = confusion(np.array([0.9, 0.1]), np.array([1, 0]), 0.5)
    assert (cm.tp, cm.fp, cm.fn, cm.tn) == (1, 0, 0, 1)


def test_confusion_threshold_zero_all_positive():
    scores = np.array([0.2, 0.8, 0.0])
    labels = np.array([0, 1, 0])
    cm = confusion(scores, labels, 0.0)
    assert cm.fp == 2 and cm.tp == 1 and cm.fn == 0 and cm.tn == 0


def test_confusion_threshold_above_one_all_negative():
    cm = confusion(np.array([0.2, 0.8]), np.array([0, 1]), 1.0 + 1e-9)
    assert cm.tp == 0 and cm.fp == 0 and cm.fn == 1 and cm.tn == 1


def test_confusion_empty_errors():
    with pytest.raises(DataError):
        confusion(np.array([]), np.array([]), 0.5)


def test_confusion_total_invariant():
    rng = np.random.default_rng(0)
    scores = rng.random(50)
    labels = rng.integers(0, 2, 50)
    cm = confusion(scores, labels, 0.3)
    assert cm.total == 50


def test_precision_examples():
    assert precision(ConfusionMatrix(3, 1, 0, 0)) == 0.75
    assert precision(ConfusionMatrix(0, 0, 2, 3)) == 1.0  # vacuous convention
    assert precision(ConfusionMatrix(0, 5, 0, 0)) == 0.0


def test_recall_examples():
    assert recall(ConfusionMatrix(3, 0, 1, 0)) == 0.75
    assert recall(ConfusionMatrix(0, 0, 4, 0)) == 0.0
    assert recall(ConfusionMatrix(4, 0, 0, 0)) == 1.0
    with pytest.raises(DataError):
        recall(ConfusionMatrix(0, 3, 0, 5))


def test_pr_curve_perfect_ranking():
    scores = np.array([0.9, 0.8, 0.2, 0.1])
    labels = np.array([1, 1, 0, 0])
    assert pr_curve(scores, labels).area == 1.0


def test_pr_curve_fixture_area():
    # thresholds 0.9, 0.8, 0.7, 0.1 -> average precision (1/2)(1 + 2/3)
    scores = np.array([0.9, 0.8, 0.7, 0.1])
    labels = np.array([1, 0, 1, 0])
    curve = pr_curve(scores, labels)
    assert abs(curve.area - (0.5 * (1 + 2 / 3))) < 1e-9
    assert [p[0] for p in curve.points] == [0.9, 0.8, 0.7, 0.1]


def test_pr_curve_chance_level_equals_prevalence():
    rng = np.random.default_rng(12)
    n = 20000
    labels = (rng.random(n) < 0.3).astype(int)
    scores = rng.random(n)  # independent of labels
    assert abs(pr_curve(scores, labels).area - 0.3) < 0.02


def test_pr_curve_single_class_errors():
    with pytest.raises(DataError):
        pr_curve(np.array([0.5, 0.6]), np.array([1, 1]))


def test_pr_curve_monotonicity():
    rng = np.random.default_rng(5)
    scores = rng.random(200)
    labels = rng.integers(0, 2, 200)
    curve = pr_curve(scores, labels)
    thresholds = [p[0] for p in curve.points]
    recalls = [p[1] for p in curve.points]
    assert thresholds == sorted(thresholds, reverse=True)
    # recalls non-increasing as threshold increases
    assert recalls == sorted(recalls)
    assert all(0 <= p[2] <= 1 for p in curve.points)
    assert 0 <= curve.area <= 1


@given(st.integers(min_value=0, max_value=2**31 - 1))
@settings(max_examples=30, deadline=None)
def test_auprc_invariant_under_monotone_transform(seed):
    rng = np.random.default_rng(seed)
    n = rng.integers(10, 80)
    scores = rng.random(n)
    labels = rng.integers(0, 2, n)
    if labels.min() == labels.max():
        labels[0] = 1 - labels[0]
    base = auprc(scores, labels)
    transformed = auprc(1.0 / (1.0 + np.exp(-(3.0 * scores + 1.0))), labels)
    assert abs(base - transformed) < 1e-12


def test_random_scorer_balanced_data():
    rng = np.random.default_rng(99)
    labels = np.array([0, 1] * 500)
    scores = rng.random(1000)
    assert abs(auprc(scores, labels) - 0.5) < 0.05


def test_confusion_negation_transposes():
    rng = np.random.default_rng(3)
    scores = rng.random(100)
    labels = rng.integers(0, 2, 100)
    t = 0.4123456  # not equal to any sampled score almost surely
    assert not np.any(scores == t)
    cm = confusion(scores, labels, t)
    flipped = confusion(1.0 - scores, 1 - labels, 1.0 - t)
    # score >= t becomes 1-score <= 1-t: strict complement when no score == t,
    # and the label flip swaps the roles of the classes
    assert flipped.tp == cm.tn
    assert flipped.tn == cm.tp
    assert flipped.fp == cm.fn
    assert flipped.fn == cm.fp
