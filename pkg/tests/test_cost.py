import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from readmit.cost import (CostParams, SavedCostMatrix, ThresholdResult, derive_beta,
                          extrapolate_total, optimize_threshold, saved_cost)
from readmit.errors import DataError
from readmit.metrics import ConfusionMatrix, confusion

PAPER = CostParams(alpha=10591, beta=2409)


def brute_force_threshold(scores, labels, params):
    """Oracle: evaluate every candidate threshold directly, lowest wins ties."""
    candidates = sorted(set([0.0, 1.0 + 1e-9]) | set(float(s) for s in scores))
    best = None
    for t in candidates:
        cm = confusion(scores, labels, t)
        value = saved_cost(cm, params)
        if best is None or value > best[0]:
            best = (value, t, cm)
    return ThresholdResult(best[1], best[0], best[2])


def test_saved_cost_exact_values():
    assert saved_cost(ConfusionMatrix(100, 50, 0, 0), PAPER) == 697750.0
    assert saved_cost(ConfusionMatrix(0, 0, 5, 5), PAPER) == 0.0
    assert saved_cost(ConfusionMatrix(0, 10, 0, 0), PAPER) == -24090.0


def test_saved_cost_matrix_entries():
    matrix = SavedCostMatrix.from_params(PAPER)
    assert matrix.tp_value == 8182.0
    assert matrix.fp_value == -2409.0
    assert matrix.fn_value == 0.0 and matrix.tn_value == 0.0


@given(st.tuples(*(st.integers(min_value=0, max_value=10_000) for _ in range(8))))
@settings(max_examples=100, deadline=None)
def test_saved_cost_linear_in_counts(counts):
    cm1 = ConfusionMatrix(*counts[:4])
    cm2 = ConfusionMatrix(*counts[4:])
    assert saved_cost(cm1, PAPER) + saved_cost(cm2, PAPER) == saved_cost(cm1 + cm2, PAPER)


def test_perfect_scorer_threshold():
    scores = np.array([0.9, 0.8, 0.2, 0.1])
    labels = np.array([1, 1, 0, 0])
    result = optimize_threshold(scores, labels, PAPER)
    assert result.saved_cost_test == 2 * (10591 - 2409)
    assert 0.2 < result.threshold <= 0.8
    assert result.confusion.fp == 0 and result.confusion.tp == 2


def test_identical_scores_pick_best_trivial_policy():
    scores = np.full(10, 0.7)
    labels = np.array([1] * 6 + [0] * 4)
    result = optimize_threshold(scores, labels, PAPER)
    all_positive = saved_cost(confusion(scores, labels, 0.0), PAPER)
    assert result.saved_cost_test == max(all_positive, 0.0)
    assert result.threshold == 0.0  # tie between 0 and 0.7 goes to the lower


def test_six_instance_fixture_matches_oracle():
    scores = np.array([0.95, 0.8, 0.7, 0.45, 0.3, 0.05])
    labels = np.array([1, 0, 1, 1, 0, 0])
    result = optimize_threshold(scores, labels, PAPER)
    oracle = brute_force_threshold(scores, labels, PAPER)
    assert result.threshold == oracle.threshold
    assert result.saved_cost_test == oracle.saved_cost_test
    assert result.confusion == oracle.confusion


def test_hundred_random_fixtures_match_oracle():
    rng = np.random.default_rng(2024)
    for trial in range(100):
        n = int(rng.integers(4, 40))
        scores = np.round(rng.random(n), 3)  # rounded scores force ties
        labels = rng.integers(0, 2, n)
        if labels.min() == labels.max():
            labels[0] = 1 - labels[0]
        params = CostParams(alpha=float(rng.integers(2000, 20000)),
                            beta=float(rng.integers(100, 1999)))
        result = optimize_threshold(scores, labels, params)
        oracle = brute_force_threshold(scores, labels, params)
        assert result.threshold == oracle.threshold, f"trial {trial}"
        assert result.saved_cost_test == oracle.saved_cost_test, f"trial {trial}"


def test_optimizer_at_least_trivial_policies():
    rng = np.random.default_rng(77)
    scores = rng.random(200)
    labels = rng.integers(0, 2, 200)
    result = optimize_threshold(scores, labels, PAPER)
    for trivial in (0.0, 1.0 + 1e-9):
        assert result.saved_cost_test >= saved_cost(
            confusion(scores, labels, trivial), PAPER)


def test_single_class_errors():
    with pytest.raises(DataError):
        optimize_threshold(np.array([0.3, 0.4]), np.array([1, 1]), PAPER)
    with pytest.raises(DataError):
        optimize_threshold(np.array([0.3, 0.4]), np.array([0, 0]), PAPER)


def test_extrapolate_paper_magnitude():
    total = extrapolate_total(59.425e6, 23053, 98053)
    assert abs(total - 252.7566705e6) < 5e4  # the published rounding
    assert extrapolate_total(0.0, 10, 100) == 0.0
    assert extrapolate_total(123.0, 50, 50) == 123.0
    with pytest.raises(DataError):
        extrapolate_total(1.0, 0, 10)


def test_derive_beta():
    assert derive_beta(10591, 4.396) == 2409
    assert derive_beta(5.0, 5.0) == 1
    with pytest.raises(DataError):
        derive_beta(100.0, 0.0)


def test_cost_params_validation():
    with pytest.raises(DataError):
        CostParams(alpha=100, beta=100)
    with pytest.raises(DataError):
        CostParams(alpha=100, beta=-5)
