import math

import numpy as np
import pytest

from readmit.errors import DataError
from readmit.models.naive_bayes import NaiveBayes, train_naive_bayes
from readmit.preprocess import Task


def _fit(X, y, is_nominal, cards, smoothing=1.0):
    return NaiveBayes(smoothing=smoothing).fit(
        np.asarray(X, dtype=float), np.asarray(y),
        np.asarray(is_nominal), np.asarray(cards))


def test_single_nominal_feature_bayes_rule():
    # smoothed likelihoods: pos (7+1)/(8+2) = 0.8, neg (1+1)/(8+2) = 0.2,
    # equal priors -> posterior for value 0 is exactly 0.8
    X = [[0]] * 7 + [[1]] + [[0]] + [[1]] * 7
    y = [1] * 8 + [0] * 8
    model = _fit(X, y, [True], [2])
    assert abs(model.score(np.array([[0.0]]))[0] - 0.8) < 1e-12


def test_identical_features_give_prior():
    # without smoothing the likelihoods cancel and the prior remains
    X = [[0]] * 8
    y = [1] * 6 + [0] * 2
    model = _fit(X, y, [True], [1], smoothing=0.0)
    assert abs(model.score(np.array([[0.0]]))[0] - 0.75) < 1e-12


def test_eight_row_fixture_matches_hand_computation():
    # two nominal features (2 values each) + one numeric, 8 rows
    X = np.array([
        [0, 0, 1.0],
        [0, 1, 2.0],
        [1, 0, 2.5],
        [0, 0, 1.5],
        [1, 1, 6.0],
        [1, 0, 5.0],
        [1, 1, 7.0],
        [0, 1, 6.5],
    ])
    y = np.array([1, 1, 1, 1, 0, 0, 0, 0])
    model = _fit(X, y, [True, True, False], [2, 2, 0])

    def oracle(x):
        # independent re-derivation of smoothed Bayes rule
        out = []
        for cls in (0, 1):
            rows = X[y == cls]
            prior = len(rows) / len(X)
            like = prior
            for j, v in enumerate(x[:2]):
                count = np.sum(rows[:, j] == v)
                like *= (count + 1.0) / (len(rows) + 2.0)
            mean = rows[:, 2].mean()
            var = max(rows[:, 2].var(), 1e-6)
            like *= math.exp(-((x[2] - mean) ** 2) / (2 * var)) / math.sqrt(2 * math.pi * var)
            out.append(like)
        return out[1] / (out[0] + out[1])

    for x in X:
        assert abs(model.score(x[None, :])[0] - oracle(x)) < 1e-9


def test_zero_variance_numeric_floored_not_error():
    X = np.array([[1.0], [1.0], [2.0], [3.0]])
    y = np.array([1, 1, 0, 0])
    model = _fit(X, y, [False], [0])
    score = model.score(np.array([[1.0]]))[0]
    assert np.isfinite(score) and 0 <= score <= 1


def test_posteriors_sum_to_one():
    rng = np.random.default_rng(8)
    X = np.column_stack([
        rng.integers(0, 3, 200).astype(float),
        rng.normal(0, 1, 200),
    ])
    y = rng.integers(0, 2, 200)
    model = _fit(X, y, [True, False], [3, 0])
    posts = model.posteriors(X)
    assert np.all(np.abs(posts.sum(axis=1) - 1.0) < 1e-9)


def test_requires_both_classes():
    with pytest.raises(DataError):
        _fit([[0.0]], [1], [True], [1])


def test_scorer_contract_on_dataset(split_data, any_task):
    train, test = split_data
    scorer = train_naive_bayes(train, any_task)
    scores = scorer.score(test)
    assert np.all((scores >= 0) & (scores <= 1))
    assert np.array_equal(scores, scorer.score(test))  # deterministic
    posts = scorer.posteriors(test)
    assert np.all(np.abs(posts.sum(axis=1) - 1.0) < 1e-9)


def test_scorer_rejects_schema_mismatch(split_data, prepared):
    train, _ = split_data
    scorer = train_naive_bayes(train, Task.ANY_READMISSION)
    scorer.fingerprint = "bogus"
    with pytest.raises(DataError, match="fingerprint"):
        scorer.score(prepared.dataset)
