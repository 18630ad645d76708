"""Naive Bayes: categorical likelihoods with additive smoothing, Gaussian numerics."""

from __future__ import annotations

import numpy as np

from ..preprocess import Dataset, Task
from .base import Scorer, nominal_cardinalities, nominal_mask, require_both_classes

VAR_FLOOR = 1e-6


class NaiveBayes:
    """Two-class NB over mixed nominal (code) and numeric columns."""

    def __init__(self, smoothing: float = 1.0, var_floor: float = VAR_FLOOR):
        self.smoothing = smoothing
        self.var_floor = var_floor

    def fit(self, X: np.ndarray, y: np.ndarray, is_nominal: np.ndarray,
            cardinalities: np.ndarray) -> "NaiveBayes":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y)
        require_both_classes(y, "naive bayes")
        self.is_nominal = np.asarray(is_nominal, dtype=bool)
        self.log_prior = np.log(np.array([np.mean(y == 0), np.mean(y == 1)]))
        self.tables: list[np.ndarray | None] = []  # (2, V) log P(value | class)
        self.gauss: list[tuple[np.ndarray, np.ndarray] | None] = []  # (mean, var) per class
        for j in range(X.shape[1]):
            if self.is_nominal[j]:
                nv = int(cardinalities[j])
                codes = X[:, j].astype(np.int64)
                table = np.empty((2, nv))
                for c in (0, 1):
                    counts = np.bincount(codes[y == c], minlength=nv).astype(np.float64)
                    with np.errstate(divide="ignore"):  # smoothing 0: log(0) = -inf is correct
                        table[c] = np.log(
                            (counts + self.smoothing) / (counts.sum() + self.smoothing * nv)
                        )
                self.tables.append(table)
                self.gauss.append(None)
            else:
                means = np.empty(2)
                variances = np.empty(2)
                for c in (0, 1):
                    col = X[y == c, j]
                    means[c] = col.mean()
                    variances[c] = max(col.var(), self.var_floor)
                self.tables.append(None)
                self.gauss.append((means, variances))
        return self

    def log_joint(self, X: np.ndarray) -> np.ndarray:
        """(n, 2) unnormalized class log-posteriors."""
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        out = np.tile(self.log_prior, (len(X), 1))
        for j in range(X.shape[1]):
            if self.is_nominal[j]:
                codes = X[:, j].astype(np.int64)
                out += self.tables[j][:, codes].T
            else:
                means, variances = self.gauss[j]
                col = X[:, j:j + 1]
                out += (-0.5 * np.log(2.0 * np.pi * variances)
                        - (col - means) ** 2 / (2.0 * variances))
        return out

    def posteriors(self, X: np.ndarray) -> np.ndarray:
        """(n, 2) normalized class posteriors (rows sum to 1)."""
        lj = self.log_joint(X)
        lj -= lj.max(axis=1, keepdims=True)
        p = np.exp(lj)
        return p / p.sum(axis=1, keepdims=True)

    def score(self, X: np.ndarray) -> np.ndarray:
        return self.posteriors(X)[:, 1]


class NaiveBayesScorer(Scorer):
    kind = "naive_bayes"

    def __init__(self, fingerprint: str, model: NaiveBayes):
        super().__init__(fingerprint)
        self.model = model

    def _score_values(self, values: np.ndarray) -> np.ndarray:
        return self.model.score(values)

    def posteriors(self, dataset: Dataset) -> np.ndarray:
        self.check_schema(dataset)
        return self.model.posteriors(dataset.values)

    def to_jsonable(self) -> dict:
        m = self.model
        return {
            "smoothing": m.smoothing,
            "var_floor": m.var_floor,
            "is_nominal": m.is_nominal.tolist(),
            "log_prior": m.log_prior.tolist(),
            "tables": [t.tolist() if t is not None else None for t in m.tables],
            "gauss": [[g[0].tolist(), g[1].tolist()] if g is not None else None
                      for g in m.gauss],
        }

    @classmethod
    def from_jsonable(cls, fingerprint: str, data: dict) -> "NaiveBayesScorer":
        m = NaiveBayes(data["smoothing"], data["var_floor"])
        m.is_nominal = np.asarray(data["is_nominal"], dtype=bool)
        m.log_prior = np.asarray(data["log_prior"])
        m.tables = [np.asarray(t) if t is not None else None for t in data["tables"]]
        m.gauss = [(np.asarray(g[0]), np.asarray(g[1])) if g is not None else None
                   for g in data["gauss"]]
        return cls(fingerprint, m)


def train_naive_bayes(dataset: Dataset, task: Task, smoothing: float = 1.0,
                      var_floor: float = VAR_FLOOR) -> NaiveBayesScorer:
    """NB on native features: categorical nominals, per-class Gaussians on counts."""
    model = NaiveBayes(smoothing, var_floor).fit(
        dataset.values, dataset.labels(task),
        nominal_mask(dataset.schema), nominal_cardinalities(dataset.schema),
    )
    return NaiveBayesScorer(dataset.schema.fingerprint(), model)
