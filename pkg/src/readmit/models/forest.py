"""Random forest of depth-limited Gini trees with out-of-bag bookkeeping."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DataError
from ..preprocess import Dataset, Task
from ._tree import DecisionTree, TreeData, fit_tree
from .base import Scorer, nominal_mask, require_both_classes


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 250
    max_depth: int = 5
    features_per_split: int = 0  # 0 -> ceil(sqrt(feature count))
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1 or self.max_depth < 1:
            raise DataError("ForestParams: n_trees and max_depth must be >= 1")

    def resolved_features(self, p: int) -> int:
        return self.features_per_split if self.features_per_split > 0 else math.ceil(math.sqrt(p))


def _tree_rng(seed: int, index: int) -> np.random.Generator:
    # derived stream per tree: parallel growth would match sequential results
    return np.random.default_rng([seed, 0xF07E57, index])


class RandomForest:
    """Low-level forest over raw arrays; score = fraction of trees voting positive."""

    def __init__(self, trees: list[DecisionTree], params: ForestParams,
                 inbag: np.ndarray | None):
        self.trees = trees
        self.params = params
        self.inbag = inbag  # (n_trees, n_train) bool, None for deserialized models

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray, is_nominal: np.ndarray,
            params: ForestParams) -> "RandomForest":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y)
        require_both_classes(y, "random forest")
        td = TreeData(X, is_nominal)
        m = params.resolved_features(td.p)
        trees = []
        inbag = np.zeros((params.n_trees, td.n), dtype=bool)
        for t in range(params.n_trees):
            rng = _tree_rng(params.seed, t)
            sample = rng.integers(0, td.n, size=td.n)
            weights = np.bincount(sample, minlength=td.n).astype(np.float64)
            rows = np.flatnonzero(weights > 0)
            inbag[t, rows] = True
            trees.append(fit_tree(td, y, weights, params.max_depth,
                                  features_per_split=m, rng=rng, row_indices=rows))
        return cls(trees, params, inbag)

    def tree_votes(self, X: np.ndarray) -> np.ndarray:
        """(n_trees, n) matrix of hard votes in {0, 1}."""
        return np.stack([tree.predict(X)[0] for tree in self.trees])

    def score(self, X: np.ndarray) -> np.ndarray:
        return self.tree_votes(X).mean(axis=0)


@dataclass
class OobResult:
    error: float
    n_evaluated: int
    n_skipped: int  # instances present in every bootstrap sample


def oob_error_forest(forest: RandomForest, X: np.ndarray, y: np.ndarray) -> OobResult:
    """Out-of-bag misclassification rate at threshold 0.5.

    Each instance is voted on only by trees whose bootstrap excluded it;
    instances that landed in every bag are skipped and counted.
    """
    if forest.inbag is None:
        raise DataError("oob_error: forest was loaded without bootstrap bookkeeping")
    votes = forest.tree_votes(X)  # (T, n)
    oob = ~forest.inbag
    counts = oob.sum(axis=0)
    covered = counts > 0
    if not covered.any():
        raise DataError(
            "oob_error: no instance has out-of-bag votes; "
            "dataset too small relative to the bootstrap"
        )
    vote_fraction = (votes * oob).sum(axis=0)[covered] / counts[covered]
    pred = (vote_fraction >= 0.5).astype(np.int8)
    error = float(np.mean(pred != np.asarray(y)[covered]))
    return OobResult(error, int(covered.sum()), int((~covered).sum()))


class RandomForestScorer(Scorer):
    kind = "random_forest"

    def __init__(self, fingerprint: str, forest: RandomForest):
        super().__init__(fingerprint)
        self.forest = forest

    def _score_values(self, values: np.ndarray) -> np.ndarray:
        return self.forest.score(values)

    def tree_votes(self, dataset: Dataset) -> np.ndarray:
        self.check_schema(dataset)
        return self.forest.tree_votes(dataset.values)

    def to_jsonable(self) -> dict:
        p = self.forest.params
        return {
            "params": {"n_trees": p.n_trees, "max_depth": p.max_depth,
                       "features_per_split": p.features_per_split, "seed": p.seed},
            "trees": [t.to_jsonable() for t in self.forest.trees],
        }

    @classmethod
    def from_jsonable(cls, fingerprint: str, data: dict) -> "RandomForestScorer":
        params = ForestParams(**data["params"])
        trees = [DecisionTree.from_jsonable(t) for t in data["trees"]]
        return cls(fingerprint, RandomForest(trees, params, inbag=None))


def train_random_forest(dataset: Dataset, task: Task,
                        params: ForestParams) -> RandomForestScorer:
    """Fit the forest on the dataset's native nominal + numeric features."""
    forest = RandomForest.fit(dataset.values, dataset.labels(task),
                              nominal_mask(dataset.schema), params)
    return RandomForestScorer(dataset.schema.fingerprint(), forest)


def oob_error(scorer: RandomForestScorer, dataset: Dataset, task: Task) -> OobResult:
    """OOB error of a trained forest against its own training dataset."""
    scorer.check_schema(dataset)
    return oob_error_forest(scorer.forest, dataset.values, dataset.labels(task))
