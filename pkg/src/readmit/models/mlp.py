"""One-hidden-layer perceptron trained by BFGS on squared error + quadratic penalty.

Inputs are the one-hot encoding, standardized with training statistics.
Both layers are sigmoid; the output activation is the risk score. The
penalty applies to connection weights, not biases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError
from ..preprocess import Dataset, Task
from .base import Scorer, require_both_classes
from .bfgs import BfgsResult, minimize_bfgs


@dataclass(frozen=True)
class MlpParams:
    hidden_nodes: int = 2
    penalty_weight: float = 1e-3
    bfgs_max_iters: int = 200
    bfgs_tolerance: float = 1e-6

    def __post_init__(self):
        if self.hidden_nodes < 1:
            raise DataError("MlpParams: hidden_nodes must be >= 1")
        if self.penalty_weight < 0:
            raise DataError("MlpParams: penalty_weight must be >= 0")


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class Mlp:
    """d -> h -> 1 network over already-standardized inputs."""

    def __init__(self, n_inputs: int, hidden_nodes: int, penalty_weight: float):
        self.d = n_inputs
        self.h = hidden_nodes
        self.penalty = penalty_weight

    # parameter vector layout: W1 (d*h) | b1 (h) | w2 (h) | b2 (1)
    def n_params(self) -> int:
        return self.d * self.h + self.h + self.h + 1

    def unpack(self, theta: np.ndarray):
        d, h = self.d, self.h
        w1 = theta[: d * h].reshape(d, h)
        b1 = theta[d * h: d * h + h]
        w2 = theta[d * h + h: d * h + 2 * h]
        b2 = theta[-1]
        return w1, b1, w2, b2

    def forward(self, X: np.ndarray, theta: np.ndarray) -> np.ndarray:
        w1, b1, w2, b2 = self.unpack(theta)
        a1 = _sigmoid(X @ w1 + b1)
        return _sigmoid(a1 @ w2 + b2)

    def objective_and_grad(self, theta: np.ndarray, X: np.ndarray,
                           y: np.ndarray) -> tuple[float, np.ndarray]:
        """Mean squared error + penalty * sum of squared connection weights."""
        w1, b1, w2, b2 = self.unpack(theta)
        n = len(X)
        a1 = _sigmoid(X @ w1 + b1)
        yhat = _sigmoid(a1 @ w2 + b2)
        resid = yhat - y
        f = float(np.mean(resid ** 2) + self.penalty * (np.sum(w1 ** 2) + np.sum(w2 ** 2)))

        r = (2.0 / n) * resid * yhat * (1.0 - yhat)
        gw2 = a1.T @ r + 2.0 * self.penalty * w2
        gb2 = np.sum(r)
        dz1 = np.outer(r, w2) * a1 * (1.0 - a1)
        gw1 = X.T @ dz1 + 2.0 * self.penalty * w1
        gb1 = dz1.sum(axis=0)
        grad = np.concatenate([gw1.ravel(), gb1, gw2, [gb2]])
        return f, grad


class MlpScorer(Scorer):
    kind = "mlp"

    def __init__(self, fingerprint: str, net: Mlp, theta: np.ndarray,
                 means: np.ndarray, stds: np.ndarray, params: MlpParams,
                 fit_info: dict):
        super().__init__(fingerprint)
        self.net = net
        self.theta = theta
        self.means = means
        self.stds = stds
        self.params = params
        self.fit_info = fit_info

    def _score_values(self, values: np.ndarray) -> np.ndarray:
        raise NotImplementedError  # needs the schema for one-hot expansion

    def score(self, dataset: Dataset) -> np.ndarray:
        self.check_schema(dataset)
        X, _ = dataset.one_hot()
        Xs = (X - self.means) / self.stds
        return np.clip(self.net.forward(Xs, self.theta), 0.0, 1.0)

    def to_jsonable(self) -> dict:
        p = self.params
        return {
            "params": {"hidden_nodes": p.hidden_nodes,
                       "penalty_weight": p.penalty_weight,
                       "bfgs_max_iters": p.bfgs_max_iters,
                       "bfgs_tolerance": p.bfgs_tolerance},
            "n_inputs": self.net.d,
            "theta": self.theta.tolist(),
            "means": self.means.tolist(),
            "stds": self.stds.tolist(),
            "fit_info": {k: v for k, v in self.fit_info.items() if k != "f_history"},
        }

    @classmethod
    def from_jsonable(cls, fingerprint: str, data: dict) -> "MlpScorer":
        params = MlpParams(**data["params"])
        net = Mlp(data["n_inputs"], params.hidden_nodes, params.penalty_weight)
        return cls(fingerprint, net, np.asarray(data["theta"]),
                   np.asarray(data["means"]), np.asarray(data["stds"]),
                   params, dict(data["fit_info"]))


def standardize_stats(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Column means and stds; constant columns get std 1 so they map to zero."""
    means = X.mean(axis=0)
    stds = X.std(axis=0)
    stds[stds < 1e-12] = 1.0
    return means, stds


def init_weights(n_params: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng([seed, 0x3117])
    return rng.uniform(-0.5, 0.5, size=n_params)


def train_mlp(dataset: Dataset, task: Task, params: MlpParams, seed: int) -> MlpScorer:
    """Fit on standardized one-hot inputs with full-batch BFGS."""
    y = dataset.labels(task).astype(np.float64)
    require_both_classes(y.astype(np.int8), "mlp")
    X, _ = dataset.one_hot()
    means, stds = standardize_stats(X)
    Xs = (X - means) / stds
    net = Mlp(X.shape[1], params.hidden_nodes, params.penalty_weight)
    theta0 = init_weights(net.n_params(), seed)
    result: BfgsResult = minimize_bfgs(
        lambda t: net.objective_and_grad(t, Xs, y),
        theta0, max_iters=params.bfgs_max_iters, gtol=params.bfgs_tolerance,
    )
    info = {
        "n_iters": result.n_iters,
        "converged": result.converged,
        "stopped_reason": result.stopped_reason,
        "final_objective": result.f,
        "grad_norm": result.grad_norm,
        "f_history": result.f_history,
    }
    return MlpScorer(dataset.schema.fingerprint(), net, result.x, means, stds,
                     params, info)
