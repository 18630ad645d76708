"""Run configuration: one flat key = value file, every knob with its default.

Unknown keys and malformed values are usage errors. The resolved config
hashes to a short digest embedded in every report so outputs are traceable
to their settings.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields, replace

from .errors import UsageError

TASK_CHOICES = ("any_readmission", "short_term", "both")
MODEL_CHOICES = ("all", "naive_bayes", "bayes_net", "random_forest", "adaboost", "mlp")
RULES_CLASS_CHOICES = ("<30", ">30", "NO", "READMITTED")


@dataclass(frozen=True)
class RunConfig:
    dataset: str = "data/diabetic_data.csv"
    mappings: str = "data/IDs_mapping.csv"
    out: str = "runs/out"
    seed: int = 1999
    task: str = "both"
    model: str = "all"
    train_fraction: float = 0.75
    cv_folds: int = 5
    forest_trees: int = 250
    forest_depth: int = 5
    forest_features: int = 0  # 0 -> ceil(sqrt(feature count))
    adaboost_rounds: int = 100
    adaboost_depth: int = 3
    mlp_hidden: int = 2
    mlp_penalty: float = 1e-3
    mlp_max_iters: int = 200
    mlp_tolerance: float = 1e-6
    nb_smoothing: float = 1.0
    nb_var_floor: float = 1e-6
    bn_bins: int = 5
    rules_min_support: int = 100
    rules_max_len: int = 4
    rules_class: str = "NO"
    cost_alpha: float = 10591.0
    cost_beta: float = 2409.0
    cost_honest: bool = True
    ablation_subsample: float = 0.25

    def validate(self) -> "RunConfig":
        if self.task not in TASK_CHOICES:
            raise UsageError(f"task must be one of {TASK_CHOICES}, got {self.task!r}")
        if self.model not in MODEL_CHOICES:
            raise UsageError(f"model must be one of {MODEL_CHOICES}, got {self.model!r}")
        if self.rules_class not in RULES_CLASS_CHOICES:
            raise UsageError(
                f"rules_class must be one of {RULES_CLASS_CHOICES}, got {self.rules_class!r}")
        if not 0 < self.train_fraction < 1:
            raise UsageError("train_fraction must be in (0, 1)")
        if not 0 < self.ablation_subsample <= 1:
            raise UsageError("ablation_subsample must be in (0, 1]")
        return self

    def tasks(self) -> list[str]:
        return ["short_term", "any_readmission"] if self.task == "both" else [self.task]

    def models(self) -> list[str]:
        if self.model == "all":
            return ["naive_bayes", "bayes_net", "random_forest", "adaboost", "mlp"]
        return [self.model]

    def model_options(self, kind: str) -> dict:
        if kind == "random_forest":
            return {"n_trees": self.forest_trees, "max_depth": self.forest_depth,
                    "features_per_split": self.forest_features}
        if kind == "adaboost":
            return {"n_rounds": self.adaboost_rounds,
                    "weak_tree_depth": self.adaboost_depth}
        if kind == "mlp":
            return {"hidden_nodes": self.mlp_hidden, "penalty_weight": self.mlp_penalty,
                    "bfgs_max_iters": self.mlp_max_iters,
                    "bfgs_tolerance": self.mlp_tolerance}
        if kind == "naive_bayes":
            return {"smoothing": self.nb_smoothing, "var_floor": self.nb_var_floor}
        if kind == "bayes_net":
            return {"smoothing": self.nb_smoothing, "n_bins": self.bn_bins}
        raise UsageError(f"unknown model kind {kind!r}")

    def to_text(self) -> str:
        lines = [f"{f.name} = {getattr(self, f.name)}" for f in fields(self)]
        return "\n".join(lines) + "\n"

    def hash(self) -> str:
        # the output directory has no bearing on results, so two runs into
        # different directories still hash (and reproduce) identically
        lines = [f"{f.name} = {getattr(self, f.name)}"
                 for f in fields(self) if f.name != "out"]
        return hashlib.sha256("\n".join(lines).encode()).hexdigest()[:12]


def _coerce(name: str, raw: str, target_type: type):
    raw = raw.strip()
    try:
        if target_type is bool:
            lowered = raw.lower()
            if lowered in ("true", "yes", "1"):
                return True
            if lowered in ("false", "no", "0"):
                return False
            raise ValueError(raw)
        if target_type is int:
            return int(raw)
        if target_type is float:
            return float(raw)
        return raw
    except ValueError:
        raise UsageError(f"config key {name!r}: cannot parse {raw!r} as "
                         f"{target_type.__name__}") from None


def parse_config_text(text: str, base: RunConfig | None = None) -> RunConfig:
    config = base or RunConfig()
    types = {f.name: f.type for f in fields(RunConfig)}
    real_types = {"str": str, "int": int, "float": float, "bool": bool}
    updates = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise UsageError(f"config line {lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key not in types:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        updates[key] = _coerce(key, value, real_types[types[key]])
    return replace(config, **updates).validate()


def load_config(path: str | None, **overrides) -> RunConfig:
    """Config from file (if given) with CLI overrides layered on top."""
    config = RunConfig()
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read config file {path!r}: {exc}") from exc
        config = parse_config_text(text, config)
    cleaned = {k: v for k, v in overrides.items() if v is not None}
    if cleaned:
        config = replace(config, **cleaned)
    return config.validate()
