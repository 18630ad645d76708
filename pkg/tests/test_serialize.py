import json

import numpy as np
import pytest

from readmit.errors import DataError
from readmit.models import load_model, oob_error, save_model, train_model
from readmit.preprocess import Task

OPTIONS = {
    "naive_bayes": {},
    "bayes_net": {"n_bins": 4},
    "random_forest": {"n_trees": 5, "max_depth": 3},
    "adaboost": {"n_rounds": 4, "weak_tree_depth": 2},
    "mlp": {"hidden_nodes": 2, "bfgs_max_iters": 15},
}


@pytest.mark.parametrize("kind", sorted(OPTIONS))
def test_round_trip_preserves_scores(kind, split_data, tmp_path):
    train, test = split_data
    scorer = train_model(kind, train, Task.ANY_READMISSION, seed=5, options=OPTIONS[kind])
    path = tmp_path / f"{kind}.json"
    save_model(scorer, str(path))
    loaded = load_model(str(path))
    assert loaded.kind == kind
    assert loaded.fingerprint == scorer.fingerprint
    assert np.allclose(loaded.score(test), scorer.score(test), atol=1e-12)


def test_version_mismatch_rejected(split_data, tmp_path):
    train, _ = split_data
    scorer = train_model("naive_bayes", train, Task.ANY_READMISSION, seed=1)
    path = tmp_path / "model.json"
    save_model(scorer, str(path))
    payload = json.loads(path.read_text())
    payload["format_version"] = 99
    path.write_text(json.dumps(payload))
    with pytest.raises(DataError, match="version"):
        load_model(str(path))


def test_unknown_kind_rejected(tmp_path):
    path = tmp_path / "model.json"
    path.write_text(json.dumps({"format_version": 1, "kind": "kmeans",
                                "fingerprint": "x", "model": {}}))
    with pytest.raises(DataError, match="kind"):
        load_model(str(path))


def test_loaded_forest_cannot_do_oob(split_data, tmp_path):
    train, _ = split_data
    scorer = train_model("random_forest", train, Task.ANY_READMISSION, seed=2,
                         options={"n_trees": 3, "max_depth": 2})
    path = tmp_path / "forest.json"
    save_model(scorer, str(path))
    loaded = load_model(str(path))
    with pytest.raises(DataError, match="bookkeeping"):
        oob_error(loaded, train, Task.ANY_READMISSION)


def test_unknown_model_kind_at_train():
    from readmit.errors import UsageError
    with pytest.raises(UsageError):
        train_model("svm", None, Task.ANY_READMISSION, seed=0)
