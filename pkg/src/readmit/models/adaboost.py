"""Discrete AdaBoost over depth-limited decision trees.

Scores map the aggregated signed margin through a logistic, so thresholding
at 0.5 recovers the usual sign rule. A round whose weak learner reaches
weighted error >= 0.5 is discarded and the loop stops; a zero-error round is
kept and also stops the loop. The weak trees consider every feature with
deterministic tie-breaking, so training needs no randomness: the seed in
BoostParams exists for config uniformity only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError
from ..preprocess import Dataset, Task
from ._tree import DecisionTree, TreeData, fit_tree
from .base import Scorer, nominal_mask, require_both_classes


@dataclass(frozen=True)
class BoostParams:
    n_rounds: int = 100
    weak_tree_depth: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.n_rounds < 1 or self.weak_tree_depth < 1:
            raise DataError("BoostParams: n_rounds and weak_tree_depth must be >= 1")


class AdaBoost:
    def __init__(self, trees: list[DecisionTree], alphas: list[float],
                 params: BoostParams, round_errors: list[float]):
        self.trees = trees
        self.alphas = alphas
        self.params = params
        self.round_errors = round_errors  # weighted error of each accepted round

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray, is_nominal: np.ndarray,
            params: BoostParams) -> "AdaBoost":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int8)
        require_both_classes(y, "adaboost")
        td = TreeData(X, is_nominal)
        n = len(y)
        w = np.full(n, 1.0 / n)
        signs = 2.0 * y - 1.0
        trees: list[DecisionTree] = []
        alphas: list[float] = []
        errors: list[float] = []
        for _ in range(params.n_rounds):
            tree = fit_tree(td, y, w, params.weak_tree_depth)
            votes = tree.predict(X)[0]
            miss = votes != y
            err = float(np.sum(w[miss]))
            if err >= 0.5:
                break  # weak learner no better than chance on weighted data
            trees.append(tree)
            errors.append(err)
            if err == 0.0:
                alphas.append(1.0)
                break
            alpha = 0.5 * np.log((1.0 - err) / err)
            alphas.append(alpha)
            w *= np.exp(-alpha * signs * (2.0 * votes - 1.0))
            w /= w.sum()
        return cls(trees, alphas, params, errors)

    def margin(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        total = np.zeros(len(X))
        for tree, alpha in zip(self.trees, self.alphas):
            total += alpha * (2.0 * tree.predict(X)[0] - 1.0)
        return total

    def score(self, X: np.ndarray) -> np.ndarray:
        return 1.0 / (1.0 + np.exp(-self.margin(X)))


class AdaBoostScorer(Scorer):
    kind = "adaboost"

    def __init__(self, fingerprint: str, model: AdaBoost):
        super().__init__(fingerprint)
        self.model = model

    def _score_values(self, values: np.ndarray) -> np.ndarray:
        return self.model.score(values)

    def to_jsonable(self) -> dict:
        p = self.model.params
        return {
            "params": {"n_rounds": p.n_rounds, "weak_tree_depth": p.weak_tree_depth,
                       "seed": p.seed},
            "alphas": list(self.model.alphas),
            "round_errors": list(self.model.round_errors),
            "trees": [t.to_jsonable() for t in self.model.trees],
        }

    @classmethod
    def from_jsonable(cls, fingerprint: str, data: dict) -> "AdaBoostScorer":
        model = AdaBoost(
            [DecisionTree.from_jsonable(t) for t in data["trees"]],
            list(data["alphas"]),
            BoostParams(**data["params"]),
            list(data["round_errors"]),
        )
        return cls(fingerprint, model)


def train_adaboost(dataset: Dataset, task: Task, params: BoostParams) -> AdaBoostScorer:
    """Boost depth-limited trees on the dataset's native features."""
    model = AdaBoost.fit(dataset.values, dataset.labels(task),
                         nominal_mask(dataset.schema), params)
    return AdaBoostScorer(dataset.schema.fingerprint(), model)
