"""The five learners behind one contract: train on a Dataset, score in [0, 1]."""

from __future__ import annotations

from ..errors import UsageError
from ..preprocess import Dataset, Task
from .adaboost import AdaBoostScorer, BoostParams, train_adaboost
from .base import Scorer
from .bayes_net import BayesNetScorer, train_bayes_net
from .cv import CandidateConfig, CvResult, cross_validate
from .forest import (ForestParams, OobResult, RandomForestScorer, oob_error,
                     train_random_forest)
from .mlp import MlpParams, MlpScorer, train_mlp
from .naive_bayes import NaiveBayesScorer, train_naive_bayes
from .serialize import load_model, save_model

MODEL_KINDS = ("naive_bayes", "bayes_net", "random_forest", "adaboost", "mlp")


def train_model(kind: str, dataset: Dataset, task: Task, seed: int,
                options: dict | None = None) -> Scorer:
    """Train any learner by name; options are the kind's hyperparameters."""
    opts = dict(options or {})
    if kind == "naive_bayes":
        return train_naive_bayes(dataset, task, **opts)
    if kind == "bayes_net":
        return train_bayes_net(dataset, task, **opts)
    if kind == "random_forest":
        return train_random_forest(dataset, task, ForestParams(seed=seed, **opts))
    if kind == "adaboost":
        return train_adaboost(dataset, task, BoostParams(seed=seed, **opts))
    if kind == "mlp":
        return train_mlp(dataset, task, MlpParams(**opts), seed)
    raise UsageError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")


__all__ = [
    "MODEL_KINDS", "Scorer", "train_model",
    "ForestParams", "BoostParams", "MlpParams",
    "train_naive_bayes", "train_bayes_net", "train_random_forest",
    "train_adaboost", "train_mlp",
    "NaiveBayesScorer", "BayesNetScorer", "RandomForestScorer",
    "AdaBoostScorer", "MlpScorer",
    "oob_error", "OobResult",
    "cross_validate", "CandidateConfig", "CvResult",
    "save_model", "load_model",
]
