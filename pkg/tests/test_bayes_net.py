import itertools

import numpy as np

from readmit.models.bayes_net import (ChowLiuBayesNet, conditional_mutual_information,
                                      train_bayes_net)
from readmit.models.naive_bayes import NaiveBayes


def _fit(X, y, is_nominal, cards, **kw):
    return ChowLiuBayesNet(**kw).fit(np.asarray(X, dtype=float), np.asarray(y),
                                     np.asarray(is_nominal), np.asarray(cards))


def _tan_posterior_oracle(model, x):
    """Posterior from the factorized joint enumerated as an explicit table."""
    p = len(model.parents)
    joint = {}
    for cls in (0, 1):
        for combo in itertools.product(*(range(v) for v in model.n_values)):
            logp = model.log_prior[cls]
            for j in range(p):
                parent = model.parents[j]
                pv = 0 if parent < 0 else combo[parent]
                logp += model.cpts[j][cls, pv, combo[j]]
            joint[(cls, combo)] = np.exp(logp)
    x_key = tuple(int(v) for v in x)
    pos = joint[(1, x_key)]
    neg = joint[(0, x_key)]
    return pos / (pos + neg)


def _product_design():
    """3 binary features empirically independent given the class (exact)."""
    rows, labels = [], []
    specs = {
        1: ([2, 1], [1, 1], [1, 2], 2),   # class 1: outer product * 2
        0: ([1, 2], [1, 1], [2, 1], 1),   # class 0: outer product * 1
    }
    for cls, (p1, p2, p3, mult) in specs.items():
        for a, b, c in itertools.product(range(2), repeat=3):
            count = p1[a] * p2[b] * p3[c] * mult
            rows.extend([[a, b, c]] * count)
            labels.extend([cls] * count)
    return np.array(rows, dtype=float), np.array(labels)


def test_independent_features_equal_naive_bayes():
    X, y = _product_design()
    is_nominal = [True] * 3
    cards = [2, 2, 2]
    bn = _fit(X, y, is_nominal, cards)
    assert bn.edges == []  # zero-CMI edges pruned -> plain NB structure
    nb = NaiveBayes(smoothing=1.0).fit(X, y, np.asarray(is_nominal), np.asarray(cards))
    grid = np.array(list(itertools.product(range(2), repeat=3)), dtype=float)
    assert np.max(np.abs(bn.score(grid) - nb.score(grid))) <= 1e-9


def test_correlated_features_get_linked():
    # X0 == X1 within each class; X2 independent noise
    rng = np.random.default_rng(4)
    n = 400
    x0 = rng.integers(0, 2, n)
    x2 = rng.integers(0, 2, n)
    y = rng.integers(0, 2, n)
    X = np.column_stack([x0, x0, x2]).astype(float)
    bn = _fit(X, y, [True] * 3, [2, 2, 2])
    assert (0, 1) in bn.edges
    assert bn.parents[1] == 0 or bn.parents[0] == 1


def test_posterior_matches_joint_table_enumeration():
    rng = np.random.default_rng(11)
    X = rng.integers(0, 2, size=(8, 3)).astype(float)
    X[0] = [0, 0, 0]
    X[7] = [1, 1, 1]
    y = np.array([1, 1, 1, 1, 0, 0, 0, 0])
    bn = _fit(X, y, [True] * 3, [2, 2, 2])
    grid = np.array(list(itertools.product(range(2), repeat=3)), dtype=float)
    scores = bn.score(grid)
    for x, s in zip(grid, scores):
        assert abs(s - _tan_posterior_oracle(bn, x)) < 1e-9


def test_single_feature_falls_back_to_naive_bayes():
    X = np.array([[0.0], [1.0], [0.0], [1.0]])
    y = np.array([1, 1, 0, 0])
    bn = _fit(X, y, [True], [2])
    nb = NaiveBayes(smoothing=1.0).fit(X, y, np.array([True]), np.array([2]))
    assert bn.edges == []
    assert np.allclose(bn.score(X), nb.score(X), atol=1e-12)


def test_cmi_zero_for_exactly_independent():
    X, y = _product_design()
    cmi = conditional_mutual_information(
        X[:, 0].astype(int), X[:, 1].astype(int), y, 2, 2)
    assert cmi == 0.0


def test_cmi_positive_for_dependent():
    x = np.array([0, 0, 1, 1] * 10)
    y = np.zeros(40, dtype=int)
    y[::2] = 1
    cmi = conditional_mutual_information(x, x, y, 2, 2)
    assert cmi > 0.1


def test_numeric_discretization_and_contract(split_data, any_task):
    train, test = split_data
    scorer = train_bayes_net(train, any_task)
    scores = scorer.score(test)
    assert np.all((scores >= 0) & (scores <= 1))
    posts = scorer.posteriors(test)
    assert np.all(np.abs(posts.sum(axis=1) - 1.0) < 1e-9)
    assert np.array_equal(scores, scorer.score(test))
