"""Preprocessing pipeline for raw encounters.

Order of operations: drop rows with missing race or any missing diagnosis,
drop the three sparse features, collapse the 23 medication columns to
insulin, group ICD-9 codes into disease families, freeze the feature schema
on training rows only, encode, and derive labels/splits for the two binary
tasks.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DataError
from .ingest import MEDICATION_COLUMNS, MISSING, RawEncounter, READMITTED_VALUES

log = logging.getLogger(__name__)

OTHER = "__other__"

# Features excluded for sparsity (97% / 40% / 49% missing).
SPARSE_FEATURES = ("weight", "payer_code", "medical_specialty")

# The 22 retained risk factors, in report order.
FEATURE_KINDS = (
    ("race", "nominal"),
    ("gender", "nominal"),
    ("age", "nominal"),
    ("admission_type_id", "nominal"),
    ("discharge_disposition_id", "nominal"),
    ("admission_source_id", "nominal"),
    ("time_in_hospital", "numeric"),
    ("num_lab_procedures", "numeric"),
    ("num_procedures", "numeric"),
    ("num_medications", "numeric"),
    ("number_outpatient", "numeric"),
    ("number_emergency", "numeric"),
    ("number_inpatient", "numeric"),
    ("diag_1", "nominal"),
    ("diag_2", "nominal"),
    ("diag_3", "nominal"),
    ("number_diagnoses", "numeric"),
    ("max_glu_serum", "nominal"),
    ("A1Cresult", "nominal"),
    ("insulin", "nominal"),
    ("change", "nominal"),
    ("diabetesMed", "nominal"),
)

FEATURE_NAMES = tuple(name for name, _ in FEATURE_KINDS)

DISPLAY_NAMES = {
    "race": "Race",
    "gender": "Gender",
    "age": "Age",
    "admission_type_id": "Admission Type",
    "discharge_disposition_id": "Discharge Disposition",
    "admission_source_id": "Admission Source",
    "time_in_hospital": "Time in Hospital",
    "num_lab_procedures": "Number of Lab Procedures",
    "num_procedures": "Number of Procedures",
    "num_medications": "Number of Medications",
    "number_outpatient": "Number of Outpatient Visits",
    "number_emergency": "Number of Emergency Visits",
    "number_inpatient": "Number of Inpatient Visits",
    "diag_1": "Diagnosis 1 (Primary)",
    "diag_2": "Diagnosis 2 (Secondary)",
    "diag_3": "Diagnosis 3 (Tertiary)",
    "number_diagnoses": "Number of Diagnoses",
    "max_glu_serum": "Glucose Serum Test",
    "A1Cresult": "A1C Test Result",
    "insulin": "Insulin",
    "change": "Change of Medication",
    "diabetesMed": "Diabetic Medication",
}

DIAG_FEATURES = ("diag_1", "diag_2", "diag_3")

ICD9_GROUPS = (
    "circulatory",
    "respiratory",
    "digestive",
    "diabetes",
    "injury",
    "musculoskeletal",
    "genitourinary",
    "neoplasms",
    "other",
)


def is_missing(value: str) -> bool:
    """Dataset missing markers: the literal '?' and the empty string."""
    return value == MISSING or value == ""


def group_icd9(code: str) -> str:
    """Map a raw ICD-9 diagnosis string to its disease-family group.

    V/E-prefixed and otherwise unparseable codes fall into "other"; callers
    that care about unparseable counts should use :func:`group_icd9_checked`.
    """
    return group_icd9_checked(code)[0]


def group_icd9_checked(code: str) -> tuple[str, bool]:
    """Like group_icd9 but also reports whether the code parsed cleanly."""
    s = code.strip()
    if is_missing(s):
        raise ValueError("group_icd9 requires a non-missing diagnosis code")
    if s[0] in "VvEe":
        return "other", True
    try:
        c = int(float(s))
    except ValueError:
        return "other", False
    if c == 250:
        return "diabetes", True
    if 390 <= c <= 459 or c == 785:
        return "circulatory", True
    if 460 <= c <= 519 or c == 786:
        return "respiratory", True
    if 520 <= c <= 579 or c == 787:
        return "digestive", True
    if 800 <= c <= 999:
        return "injury", True
    if 710 <= c <= 739:
        return "musculoskeletal", True
    if 580 <= c <= 629 or c == 788:
        return "genitourinary", True
    if 140 <= c <= 239:
        return "neoplasms", True
    return "other", True


def drop_sparse_features(columns: list[str] | tuple[str, ...]) -> list[str]:
    """Remove weight / payer_code / medical_specialty from a column list."""
    return [c for c in columns if c not in SPARSE_FEATURES]


def reduce_medications(columns: list[str] | tuple[str, ...]) -> list[str]:
    """Keep insulin as the only medication column."""
    dropped = set(MEDICATION_COLUMNS) - {"insulin"}
    return [c for c in columns if c not in dropped]


@dataclass(frozen=True)
class FilterCounts:
    rows_in: int
    removed_missing_race: int
    removed_missing_diag: int  # rows with any missing diagnosis and race present
    rows_out: int


def partition_filtered(rows: list[RawEncounter]) -> tuple[list[RawEncounter], FilterCounts]:
    """Split rows into (kept, counts) applying the missing race/diagnosis filter."""
    kept: list[RawEncounter] = []
    no_race = 0
    no_diag = 0
    for row in rows:
        if is_missing(row.get("race")):
            no_race += 1
            continue
        if any(is_missing(row.get(d)) for d in DIAG_FEATURES):
            no_diag += 1
            continue
        kept.append(row)
    counts = FilterCounts(len(rows), no_race, no_diag, len(kept))
    return kept, counts


def filter_rows(rows: list[RawEncounter]) -> list[RawEncounter]:
    """Drop rows with missing race or any missing diagnosis."""
    kept, counts = partition_filtered(rows)
    log.info(
        "filter_rows: %d in, removed %d missing race + %d missing diagnosis, %d out",
        counts.rows_in, counts.removed_missing_race,
        counts.removed_missing_diag, counts.rows_out,
    )
    return kept


@dataclass(frozen=True)
class Feature:
    """One schema entry: a named nominal or numeric risk factor."""

    name: str
    kind: str  # "nominal" | "numeric"
    values: tuple[str, ...] | None = None  # nominal vocabulary, OTHER last
    units: str | None = None  # numeric only

    def code_of(self, value: str) -> int:
        """Vocabulary index of a nominal value; unseen values map to OTHER."""
        try:
            return self.values.index(value)
        except ValueError:
            return len(self.values) - 1


@dataclass(frozen=True)
class FeatureSchema:
    """The frozen 22-feature schema derived from training rows."""

    features: tuple[Feature, ...]

    def __post_init__(self):
        if len(self.features) != len(FEATURE_NAMES):
            raise DataError(
                f"schema must have {len(FEATURE_NAMES)} features, got {len(self.features)}"
            )

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    def feature(self, name: str) -> Feature:
        for f in self.features:
            if f.name == name:
                return f
        raise KeyError(name)

    def nominal_indices(self) -> list[int]:
        return [i for i, f in enumerate(self.features) if f.kind == "nominal"]

    def numeric_indices(self) -> list[int]:
        return [i for i, f in enumerate(self.features) if f.kind == "numeric"]

    def to_jsonable(self) -> list[dict]:
        return [
            {"name": f.name, "kind": f.kind,
             "values": list(f.values) if f.values else None, "units": f.units}
            for f in self.features
        ]

    @classmethod
    def from_jsonable(cls, data: list[dict]) -> "FeatureSchema":
        return cls(tuple(
            Feature(d["name"], d["kind"],
                    tuple(d["values"]) if d["values"] else None, d.get("units"))
            for d in data
        ))

    def fingerprint(self) -> str:
        blob = json.dumps(self.to_jsonable(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _nominal_value(row: RawEncounter, name: str) -> str | None:
    """Transformed nominal value for a row, or None when missing."""
    raw = row.get(name)
    if name in DIAG_FEATURES:
        if is_missing(raw):
            return None
        return group_icd9(raw)
    if name == "insulin" and is_missing(raw):
        # dataset convention: absent insulin record means no insulin
        return "No"
    if is_missing(raw):
        return None
    return raw


def build_schema(train_rows: list[RawEncounter]) -> FeatureSchema:
    """Freeze the schema from training rows: nominal vocabularies + OTHER bucket."""
    vocab: dict[str, set[str]] = {n: set() for n, k in FEATURE_KINDS if k == "nominal"}
    for row in train_rows:
        for name in vocab:
            value = _nominal_value(row, name)
            if value is not None:
                vocab[name].add(value)
    features = []
    for name, kind in FEATURE_KINDS:
        if kind == "nominal":
            values = tuple(sorted(vocab[name])) + (OTHER,)
            features.append(Feature(name, kind, values=values))
        else:
            units = "days" if name == "time_in_hospital" else "counts"
            features.append(Feature(name, kind, units=units))
    return FeatureSchema(tuple(features))


class Task(Enum):
    """The two binary labelings of the three-way readmitted field."""

    SHORT_TERM = "short_term"        # "<30" vs (">30" or "NO")
    ANY_READMISSION = "any_readmission"  # ("<30" or ">30") vs "NO"


def label(raw_readmitted: str, task: Task) -> int:
    """Binary label (1 = positive readmission class) for one encounter."""
    if raw_readmitted not in READMITTED_VALUES:
        raise DataError(f"unknown readmitted value {raw_readmitted!r}")
    if task is Task.SHORT_TERM:
        return int(raw_readmitted == "<30")
    return int(raw_readmitted != "NO")


# readmitted codes used in the encoded dataset
READMIT_LT30, READMIT_GT30, READMIT_NO = 0, 1, 2


@dataclass
class VectorizeStats:
    unseen_nominal: int = 0
    unparseable_diag: int = 0
    insulin_missing: int = 0


@dataclass(frozen=True)
class EncounterVector:
    """Single-row view: named feature values, binary label and raw class."""

    encounter_id: int
    features: dict[str, str | float]
    label: int
    raw_readmitted: str


@dataclass
class Dataset:
    """Encoded encounters: nominal columns hold vocabulary codes, numeric raw values."""

    schema: FeatureSchema
    encounter_ids: np.ndarray  # (n,) int64
    values: np.ndarray         # (n, 22) float64
    readmitted: np.ndarray     # (n,) uint8 in {0: "<30", 1: ">30", 2: "NO"}
    stats: VectorizeStats = field(default_factory=VectorizeStats)

    def __len__(self) -> int:
        return len(self.encounter_ids)

    def labels(self, task: Task) -> np.ndarray:
        if task is Task.SHORT_TERM:
            return (self.readmitted == READMIT_LT30).astype(np.int8)
        return (self.readmitted != READMIT_NO).astype(np.int8)

    def raw_readmitted(self, i: int) -> str:
        return READMITTED_VALUES[self.readmitted[i]]

    def subset(self, indices: np.ndarray) -> "Dataset":
        return Dataset(self.schema, self.encounter_ids[indices],
                       self.values[indices], self.readmitted[indices])

    def index_of(self, ids: np.ndarray) -> np.ndarray:
        """Row indices of the given encounter ids (raises on unknown ids)."""
        order = np.argsort(self.encounter_ids)
        pos = np.searchsorted(self.encounter_ids, ids, sorter=order)
        if np.any(pos >= len(order)):
            raise DataError("unknown encounter id in selection")
        idx = order[pos]
        if not np.array_equal(self.encounter_ids[idx], np.asarray(ids)):
            raise DataError("unknown encounter id in selection")
        return idx

    def subset_by_ids(self, ids: np.ndarray) -> "Dataset":
        return self.subset(self.index_of(ids))

    def vector(self, i: int, task: Task = Task.ANY_READMISSION) -> EncounterVector:
        feats: dict[str, str | float] = {}
        for j, f in enumerate(self.schema.features):
            if f.kind == "nominal":
                feats[f.name] = f.values[int(self.values[i, j])]
            else:
                feats[f.name] = float(self.values[i, j])
        raw = self.raw_readmitted(i)
        return EncounterVector(int(self.encounter_ids[i]), feats, label(raw, task), raw)

    def one_hot(self) -> tuple[np.ndarray, list[str]]:
        """Expand nominal features to indicators; numeric pass through."""
        return encode_onehot(self.values, self.schema)

    # -- byte-stable cache (plain .npy + canonical JSON; no timestamps) --

    def save(self, directory: str) -> None:
        os.makedirs(directory, exist_ok=True)
        np.save(os.path.join(directory, "encounter_ids.npy"), self.encounter_ids)
        np.save(os.path.join(directory, "values.npy"), self.values)
        np.save(os.path.join(directory, "readmitted.npy"), self.readmitted)
        with open(os.path.join(directory, "schema.json"), "w", encoding="utf-8") as fh:
            json.dump(self.schema.to_jsonable(), fh, sort_keys=True, indent=1)

    @classmethod
    def load(cls, directory: str) -> "Dataset":
        try:
            with open(os.path.join(directory, "schema.json"), encoding="utf-8") as fh:
                schema = FeatureSchema.from_jsonable(json.load(fh))
            return cls(
                schema,
                np.load(os.path.join(directory, "encounter_ids.npy")),
                np.load(os.path.join(directory, "values.npy")),
                np.load(os.path.join(directory, "readmitted.npy")),
            )
        except OSError as exc:
            raise DataError(f"cannot load cached dataset from {directory!r}: {exc}") from exc


def build_vectors(rows: list[RawEncounter], schema: FeatureSchema) -> Dataset:
    """Encode rows against a frozen schema.

    Unseen nominal values map to the reserved OTHER bucket (counted).
    Numeric fields must be finite and non-negative.
    """
    n = len(rows)
    values = np.empty((n, len(schema.features)), dtype=np.float64)
    ids = np.empty(n, dtype=np.int64)
    readmitted = np.empty(n, dtype=np.uint8)
    stats = VectorizeStats()
    readmit_code = {v: i for i, v in enumerate(READMITTED_VALUES)}
    for i, row in enumerate(rows):
        ids[i] = row.encounter_id
        readmitted[i] = readmit_code[row.readmitted]
        for j, f in enumerate(schema.features):
            raw = row.get(f.name)
            if f.kind == "nominal":
                if f.name in DIAG_FEATURES:
                    group, ok = group_icd9_checked(raw)
                    if not ok:
                        stats.unparseable_diag += 1
                    value = group
                elif f.name == "insulin" and is_missing(raw):
                    stats.insulin_missing += 1
                    value = "No"
                elif is_missing(raw):
                    value = OTHER
                else:
                    value = raw
                code = f.code_of(value)
                if value != OTHER and f.values[code] == OTHER:
                    stats.unseen_nominal += 1
                values[i, j] = code
            else:
                try:
                    x = float(raw)
                except ValueError:
                    raise DataError(
                        f"encounter {row.encounter_id}: {f.name}={raw!r} is not numeric"
                    ) from None
                if not np.isfinite(x) or x < 0:
                    raise DataError(
                        f"encounter {row.encounter_id}: {f.name}={raw!r} "
                        "must be finite and non-negative"
                    )
                values[i, j] = x
    if stats.unseen_nominal:
        log.warning("%d nominal values unseen in training mapped to OTHER",
                    stats.unseen_nominal)
    if stats.insulin_missing:
        log.warning("%d missing insulin values treated as 'No'", stats.insulin_missing)
    return Dataset(schema, ids, values, readmitted, stats)


def encode_onehot(values: np.ndarray, schema: FeatureSchema) -> tuple[np.ndarray, list[str]]:
    """One indicator column per allowed nominal value; numeric pass through.

    Output dimensionality is fixed by the schema, so any two encounters
    encode to the same width.
    """
    values = np.atleast_2d(values)
    columns: list[np.ndarray] = []
    names: list[str] = []
    for j, f in enumerate(schema.features):
        if f.kind == "nominal":
            codes = values[:, j].astype(np.int64)
            block = np.zeros((len(values), len(f.values)))
            block[np.arange(len(values)), codes] = 1.0
            columns.append(block)
            names.extend(f"{f.name}={v}" for v in f.values)
        else:
            columns.append(values[:, j:j + 1])
            names.append(f.name)
    return np.hstack(columns), names


@dataclass(frozen=True)
class SplitPlan:
    """75/25 train/test partition plus five CV folds over the training ids."""

    seed: int
    train_ids: np.ndarray
    test_ids: np.ndarray
    cv_folds: tuple[np.ndarray, ...]


def make_split(
    ids: np.ndarray,
    seed: int,
    labels: np.ndarray | None = None,
    train_fraction: float = 0.75,
    n_folds: int = 5,
) -> SplitPlan:
    """Deterministic stratified split of encounter ids.

    When labels are given, the train/test proportions and folds preserve the
    label mix (the short-term task is heavily skewed, so stratification keeps
    PR metrics stable across folds). The overall train size is within one
    instance of train_fraction * len(ids).
    """
    ids = np.asarray(ids, dtype=np.int64)
    if len(ids) == 0:
        raise DataError("make_split: empty id list")
    if len(np.unique(ids)) != len(ids):
        raise DataError("make_split: duplicate ids")
    if labels is None:
        strata = [np.arange(len(ids))]
    else:
        labels = np.asarray(labels)
        if len(labels) != len(ids):
            raise DataError("make_split: ids and labels length mismatch")
        strata = [np.flatnonzero(labels == v) for v in np.unique(labels)]

    rng = np.random.default_rng([int(seed), 0x5EED])
    n_train_target = round(train_fraction * len(ids))
    quotas = []
    for stratum in strata:
        exact = train_fraction * len(stratum)
        quotas.append([int(exact), exact - int(exact)])
    short = n_train_target - sum(q[0] for q in quotas)
    # largest-remainder rounding so the global train size is exact
    for k in sorted(range(len(quotas)), key=lambda k: (-quotas[k][1], k))[:short]:
        quotas[k][0] += 1

    train_parts, test_parts = [], []
    fold_parts: list[list[np.ndarray]] = [[] for _ in range(n_folds)]
    for stratum, (quota, _) in zip(strata, quotas):
        perm = stratum[rng.permutation(len(stratum))]
        train_parts.append(ids[perm[:quota]])
        test_parts.append(ids[perm[quota:]])
        for f in range(n_folds):
            fold_parts[f].append(ids[perm[f:quota:n_folds]])
    train_ids = np.sort(np.concatenate(train_parts))
    test_ids = np.sort(np.concatenate(test_parts))
    if len(train_ids) < n_folds:
        raise DataError(
            f"make_split: {len(train_ids)} training ids cannot fill {n_folds} folds"
        )
    folds = tuple(np.sort(np.concatenate(parts)) for parts in fold_parts)
    return SplitPlan(int(seed), train_ids, test_ids, folds)


def class_distribution(readmitted: np.ndarray) -> dict[str, float]:
    """Fractions per raw readmitted class, keyed by the dataset tokens."""
    n = len(readmitted)
    return {
        value: float(np.count_nonzero(readmitted == code) / n) if n else 0.0
        for code, value in enumerate(READMITTED_VALUES)
    }
