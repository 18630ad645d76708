"""Versioned JSON persistence for trained scorers."""

from __future__ import annotations

import json
import os

from ..errors import DataError
from .base import Scorer

FORMAT_VERSION = 1


def save_model(scorer: Scorer, path: str) -> None:
    payload = {
        "format_version": FORMAT_VERSION,
        "kind": scorer.kind,
        "fingerprint": scorer.fingerprint,
        "model": scorer.to_jsonable(),
    }
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True)


def load_model(path: str) -> Scorer:
    from .adaboost import AdaBoostScorer
    from .bayes_net import BayesNetScorer
    from .forest import RandomForestScorer
    from .mlp import MlpScorer
    from .naive_bayes import NaiveBayesScorer

    classes = {
        "naive_bayes": NaiveBayesScorer,
        "bayes_net": BayesNetScorer,
        "random_forest": RandomForestScorer,
        "adaboost": AdaBoostScorer,
        "mlp": MlpScorer,
    }
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot load model from {path!r}: {exc}") from exc
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise DataError(
            f"{path}: unsupported model format version {version!r} "
            f"(expected {FORMAT_VERSION})"
        )
    kind = payload.get("kind")
    if kind not in classes:
        raise DataError(f"{path}: unknown model kind {kind!r}")
    return classes[kind].from_jsonable(payload["fingerprint"], payload["model"])
