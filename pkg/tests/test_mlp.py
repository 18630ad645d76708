import numpy as np
import pytest

from readmit.errors import NumericalError
from readmit.models.bfgs import minimize_bfgs
from readmit.models.mlp import Mlp, MlpParams, init_weights, standardize_stats, train_mlp
from tests.conftest import toy_blobs


def test_zero_weights_score_half():
    net = Mlp(n_inputs=4, hidden_nodes=2, penalty_weight=0.0)
    X = np.random.default_rng(0).normal(size=(10, 4))
    out = net.forward(X, np.zeros(net.n_params()))
    assert np.allclose(out, 0.5)


def _finite_difference_grad(net, theta, X, y, h=1e-5):
    grad = np.empty_like(theta)
    for i in range(len(theta)):
        plus, minus = theta.copy(), theta.copy()
        plus[i] += h
        minus[i] -= h
        fp, _ = net.objective_and_grad(plus, X, y)
        fm, _ = net.objective_and_grad(minus, X, y)
        grad[i] = (fp - fm) / (2 * h)
    return grad


def test_gradient_matches_central_differences():
    rng = np.random.default_rng(123)
    X = rng.normal(size=(30, 5))
    y = rng.integers(0, 2, 30).astype(float)
    net = Mlp(n_inputs=5, hidden_nodes=3, penalty_weight=1e-3)
    worst = 0.0
    for point in range(10):
        theta = rng.uniform(-1.5, 1.5, net.n_params())
        _, analytic = net.objective_and_grad(theta, X, y)
        numeric = _finite_difference_grad(net, theta, X, y)
        denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
        worst = max(worst, float(np.max(np.abs(analytic - numeric) / denom)))
    assert worst < 1e-4


def test_objective_decreases_over_accepted_steps(split_data):
    X, y = toy_blobs(n=200, seed=2)
    net = Mlp(n_inputs=2, hidden_nodes=2, penalty_weight=0.0)
    theta0 = init_weights(net.n_params(), seed=1)
    result = minimize_bfgs(lambda t: net.objective_and_grad(t, X, y.astype(float)),
                           theta0, max_iters=150, gtol=1e-8)
    history = np.array(result.f_history)
    assert np.all(np.diff(history) <= 1e-15)  # monotone over accepted steps
    assert history[-1] < history[0]


def test_bfgs_solves_quadratic():
    A = np.diag([1.0, 4.0, 9.0])
    b = np.array([1.0, -2.0, 3.0])

    def fg(x):
        return 0.5 * x @ A @ x - b @ x, A @ x - b

    result = minimize_bfgs(fg, np.zeros(3), max_iters=100, gtol=1e-10)
    assert result.converged
    assert np.allclose(result.x, np.linalg.solve(A, b), atol=1e-6)


def test_bfgs_nonfinite_raises_with_iteration():
    def fg(x):
        if x[0] > 0.5:
            return float("nan"), np.array([float("nan")])
        return float(-x[0]), np.array([-1.0])  # pushes x upward

    with pytest.raises(NumericalError, match="iteration"):
        minimize_bfgs(fg, np.array([0.0]), max_iters=50, gtol=1e-12)


def test_standardize_handles_constant_columns():
    X = np.column_stack([np.ones(10), np.arange(10, dtype=float)])
    means, stds = standardize_stats(X)
    assert stds[0] == 1.0
    Xs = (X - means) / stds
    assert np.allclose(Xs[:, 0], 0.0)


def test_train_mlp_contract(split_data, any_task):
    train, test = split_data
    params = MlpParams(hidden_nodes=2, penalty_weight=1e-3, bfgs_max_iters=30)
    scorer = train_mlp(train, any_task, params, seed=3)
    scores = scorer.score(test)
    assert np.all((scores >= 0) & (scores <= 1))
    again = train_mlp(train, any_task, params, seed=3)
    assert np.array_equal(scores, again.score(test))  # same seed, same model
    assert scorer.fit_info["n_iters"] <= 30


def test_mlp_learns_separable_toy():
    X, y = toy_blobs(n=300, seed=9)
    net = Mlp(n_inputs=2, hidden_nodes=2, penalty_weight=0.0)
    theta0 = init_weights(net.n_params(), seed=2)
    result = minimize_bfgs(lambda t: net.objective_and_grad(t, X, y.astype(float)),
                           theta0, max_iters=200, gtol=1e-8)
    pred = net.forward(X, result.x) > 0.5
    assert np.mean(pred == y) > 0.95


def test_invalid_params():
    from readmit.errors import DataError
    with pytest.raises(DataError):
        MlpParams(hidden_nodes=0)
    with pytest.raises(DataError):
        MlpParams(penalty_weight=-1.0)
