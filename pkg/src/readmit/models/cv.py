"""Five-fold cross-validation for picking learner configurations by AUPRC."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError
from ..metrics import auprc
from ..preprocess import Dataset, SplitPlan, Task


@dataclass(frozen=True)
class CandidateConfig:
    kind: str
    options: dict


@dataclass
class CvResult:
    fold_scores: list[list[float]]  # [config][fold] AUPRC
    mean_scores: list[float]
    selected: int
    selected_config: CandidateConfig


def _model_size(config: CandidateConfig) -> int:
    """Tie-break metric: smaller models win ties."""
    opts = config.options
    return int(opts.get("n_trees", 0) or opts.get("n_rounds", 0)
               or opts.get("hidden_nodes", 0))


def cross_validate(candidates: list[CandidateConfig], dataset: Dataset, task: Task,
                   split: SplitPlan, seed: int) -> CvResult:
    """Train each candidate on four folds, score the held-out fold, pick the best mean.

    Ties go to the smaller model (fewer trees / rounds / hidden nodes).
    """
    from . import train_model  # local import to avoid a cycle

    if not candidates:
        raise DataError("cross_validate: no candidate configurations")
    folds = [dataset.subset_by_ids(ids) for ids in split.cv_folds]
    for k, fold in enumerate(folds):
        y = fold.labels(task)
        if len(y) == 0 or y.min() == y.max():
            raise DataError(f"cross_validate: fold {k} contains a single class")

    fold_scores: list[list[float]] = []
    for config in candidates:
        scores = []
        for k in range(len(folds)):
            train_ids = np.concatenate(
                [split.cv_folds[i] for i in range(len(folds)) if i != k])
            train_part = dataset.subset_by_ids(train_ids)
            model = train_model(config.kind, train_part, task, seed, config.options)
            scores.append(auprc(model.score(folds[k]), folds[k].labels(task)))
        fold_scores.append(scores)

    means = [float(np.mean(s)) for s in fold_scores]
    best = max(range(len(candidates)),
               key=lambda i: (means[i], -_model_size(candidates[i]), -i))
    return CvResult(fold_scores, means, best, candidates[best])
