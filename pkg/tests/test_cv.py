import numpy as np
import pytest

from readmit.errors import DataError
from readmit.models.cv import CandidateConfig, cross_validate
from readmit.preprocess import SplitPlan, Task


def test_single_config_assessed(prepared, synth_config):
    result = cross_validate(
        [CandidateConfig("naive_bayes", {})],
        prepared.dataset, Task.ANY_READMISSION, prepared.split, synth_config.seed)
    assert result.selected == 0
    assert len(result.fold_scores[0]) == 5
    assert all(0 <= s <= 1 for s in result.fold_scores[0])


def test_dominant_config_selected(prepared, synth_config):
    candidates = [
        CandidateConfig("random_forest", {"n_trees": 1, "max_depth": 1}),
        CandidateConfig("random_forest", {"n_trees": 15, "max_depth": 5}),
    ]
    result = cross_validate(candidates, prepared.dataset, Task.ANY_READMISSION,
                            prepared.split, synth_config.seed)
    per_fold_dominance = [
        b >= a for a, b in zip(result.fold_scores[0], result.fold_scores[1])
    ]
    if all(per_fold_dominance):
        assert result.selected == 1


def test_exact_tie_prefers_smaller_model(prepared, synth_config):
    # constant scores make every config identical in AUPRC, so the smaller
    # forest must win even when listed second
    candidates = [
        CandidateConfig("random_forest", {"n_trees": 9, "max_depth": 1,
                                          "features_per_split": 22}),
        CandidateConfig("random_forest", {"n_trees": 3, "max_depth": 1,
                                          "features_per_split": 22}),
    ]
    constant = prepared.dataset.subset(np.arange(len(prepared.dataset)))
    constant.values = constant.values.copy()
    constant.values[:, :] = np.tile(constant.values[0], (len(constant), 1))
    result = cross_validate(candidates, constant, Task.ANY_READMISSION,
                            prepared.split, synth_config.seed)
    assert result.mean_scores[0] == result.mean_scores[1]
    assert result.selected == 1


def test_single_class_fold_errors(prepared, synth_config):
    ids = prepared.split.train_ids
    dataset = prepared.dataset
    positives = dataset.subset_by_ids(ids).labels(Task.ANY_READMISSION)
    pos_ids = ids[positives == 1]
    neg_ids = ids[positives == 0]
    # fold 0 holds only negatives
    folds = (neg_ids[:40],
             np.sort(np.concatenate([pos_ids[:30], neg_ids[40:70]])),
             np.sort(np.concatenate([pos_ids[30:60], neg_ids[70:100]])),
             np.sort(np.concatenate([pos_ids[60:90], neg_ids[100:130]])),
             np.sort(np.concatenate([pos_ids[90:120], neg_ids[130:160]])))
    degenerate = SplitPlan(1, np.sort(np.concatenate(folds)),
                           prepared.split.test_ids, folds)
    with pytest.raises(DataError, match="single class"):
        cross_validate([CandidateConfig("naive_bayes", {})],
                       dataset, Task.ANY_READMISSION, degenerate, 1)


def test_no_candidates_errors(prepared):
    with pytest.raises(DataError):
        cross_validate([], prepared.dataset, Task.ANY_READMISSION, prepared.split, 1)
