"""Shared fixtures: synthetic dataset files and the optional real dataset.

The real UCI encounter file is never bundled; tests that need it read the
directory from the READMIT_DATA environment variable (default ./data) and
skip with instructions when the file is absent.
"""

from __future__ import annotations

import os

import numpy as np
import pytest

from readmit import pipeline
from readmit.config import RunConfig
from readmit.preprocess import Task
from readmit.synthetic import write_dataset_csv, write_mappings_csv

SYNTH_N = 2500
SYNTH_SEED = 42


def real_data_dir() -> str:
    return os.environ.get("READMIT_DATA", "data")


def require_real_dataset() -> tuple[str, str]:
    """(dataset, mappings) paths, skipping when the UCI file is not on disk."""
    directory = real_data_dir()
    dataset = os.path.join(directory, "diabetic_data.csv")
    if not os.path.exists(dataset):
        pytest.skip(
            "real dataset not available: place diabetic_data.csv (UCI "
            "'Diabetes 130-US hospitals' dataset) under "
            f"{directory!r} or set READMIT_DATA"
        )
    mappings = os.path.join(directory, "IDs_mapping.csv")
    return dataset, mappings if os.path.exists(mappings) else ""


@pytest.fixture(scope="session")
def synth_files(tmp_path_factory) -> dict:
    root = tmp_path_factory.mktemp("synth")
    dataset = str(root / "diabetic_data.csv")
    mappings = str(root / "IDs_mapping.csv")
    write_dataset_csv(dataset, SYNTH_N, seed=SYNTH_SEED)
    write_mappings_csv(mappings)
    return {"dataset": dataset, "mappings": mappings, "root": str(root)}


@pytest.fixture(scope="session")
def synth_config(synth_files, tmp_path_factory) -> RunConfig:
    out = tmp_path_factory.mktemp("out")
    return RunConfig(
        dataset=synth_files["dataset"], mappings=synth_files["mappings"],
        out=str(out), seed=7,
        forest_trees=25, adaboost_rounds=10, mlp_max_iters=40,
        rules_min_support=25, rules_max_len=3, ablation_subsample=1.0,
    )


@pytest.fixture(scope="session")
def prepared(synth_config) -> pipeline.Prepared:
    return pipeline.prepare(synth_config)


@pytest.fixture(scope="session")
def split_data(prepared):
    """(train, test) Datasets from the synthetic pipeline."""
    train = prepared.dataset.subset_by_ids(prepared.split.train_ids)
    test = prepared.dataset.subset_by_ids(prepared.split.test_ids)
    return train, test


@pytest.fixture(scope="session")
def any_task():
    return Task.ANY_READMISSION


def toy_blobs(n=300, seed=0, flip=0.0):
    """Two numeric features, label = x0 + x1 > 1, optional label noise."""
    rng = np.random.default_rng(seed)
    X = rng.uniform(0, 1, size=(n, 2))
    y = (X[:, 0] + X[:, 1] > 1.0).astype(np.int8)
    if flip:
        noise = rng.random(n) < flip
        y = np.where(noise, 1 - y, y)
    return X, y
