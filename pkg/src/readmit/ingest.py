"""Reading and validating the raw encounter CSV and the ID-mapping file.

Everything stays a raw string at this layer; typing and cleaning happen in
:mod:`readmit.preprocess` so parse errors surface exactly once, with line
numbers.
"""

from __future__ import annotations

import csv
import logging
import sys
from dataclasses import dataclass
from typing import Iterable

from .errors import DataError

log = logging.getLogger(__name__)

MISSING = "?"

READMITTED_VALUES = ("<30", ">30", "NO")

MEDICATION_COLUMNS = (
    "metformin", "repaglinide", "nateglinide", "chlorpropamide",
    "glimepiride", "acetohexamide", "glipizide", "glyburide", "tolbutamide",
    "pioglitazone", "rosiglitazone", "acarbose", "miglitol", "troglitazone",
    "tolazamide", "examide", "citoglipton", "insulin",
    "glyburide-metformin", "glipizide-metformin",
    "glimepiride-pioglitazone", "metformin-rosiglitazone",
    "metformin-pioglitazone",
)

# Column order of the published diabetic_data.csv (50 columns).
COLUMNS = (
    "encounter_id", "patient_nbr", "race", "gender", "age", "weight",
    "admission_type_id", "discharge_disposition_id", "admission_source_id",
    "time_in_hospital", "payer_code", "medical_specialty",
    "num_lab_procedures", "num_procedures", "num_medications",
    "number_outpatient", "number_emergency", "number_inpatient",
    "diag_1", "diag_2", "diag_3", "number_diagnoses",
    "max_glu_serum", "A1Cresult",
) + MEDICATION_COLUMNS + ("change", "diabetesMed", "readmitted")

_COL_INDEX = {name: i for i, name in enumerate(COLUMNS)}


@dataclass(frozen=True, slots=True)
class RawEncounter:
    """One CSV row, all 50 fields kept verbatim as strings."""

    values: tuple[str, ...]

    @property
    def encounter_id(self) -> int:
        return int(self.values[0])

    @property
    def patient_nbr(self) -> int:
        return int(self.values[1])

    @property
    def readmitted(self) -> str:
        return self.values[-1]

    def get(self, column: str) -> str:
        return self.values[_COL_INDEX[column]]

    def to_row(self) -> list[str]:
        """Field values in file column order (round-trips the source row)."""
        return list(self.values)


@dataclass(frozen=True, slots=True)
class IdMapping:
    """One row of IDs_mapping.csv: (table, id) -> human-readable description."""

    table: str  # admission_type | discharge_disposition | admission_source
    id: int
    description: str


_MAPPING_TABLES = {
    "admission_type_id": "admission_type",
    "discharge_disposition_id": "discharge_disposition",
    "admission_source_id": "admission_source",
}


def load_dataset(path: str) -> list[RawEncounter]:
    """Parse the encounter CSV into RawEncounter records.

    Validates the header, the column count of every row, encounter_id
    uniqueness and the readmitted vocabulary. Raises DataError naming the
    offending line on any violation; never drops rows silently.
    """
    rows: list[RawEncounter] = []
    seen_ids: set[int] = set()
    empty_fields = 0
    intern = sys.intern
    try:
        handle = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot open dataset file {path!r}: {exc}") from exc
    with handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file, expected a header row") from None
        if tuple(header) != COLUMNS:
            raise DataError(
                f"{path}: unexpected header ({len(header)} columns); "
                f"expected the {len(COLUMNS)}-column diabetic_data.csv layout"
            )
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(COLUMNS):
                raise DataError(
                    f"{path}:{lineno}: expected {len(COLUMNS)} columns, got {len(row)}"
                )
            readmitted = row[-1]
            if readmitted not in READMITTED_VALUES:
                raise DataError(
                    f"{path}:{lineno}: unknown readmitted value {readmitted!r}"
                )
            try:
                enc_id = int(row[0])
            except ValueError:
                raise DataError(
                    f"{path}:{lineno}: encounter_id {row[0]!r} is not an integer"
                ) from None
            if enc_id in seen_ids:
                raise DataError(f"{path}:{lineno}: duplicate encounter_id {enc_id}")
            seen_ids.add(enc_id)
            empty_fields += row.count("")
            rows.append(RawEncounter(tuple(intern(v) for v in row)))
    if empty_fields:
        log.warning(
            "%s: %d empty fields treated as missing downstream", path, empty_fields
        )
    log.info("%s: parsed %d data rows", path, len(rows))
    return rows


def load_id_mappings(path: str) -> list[IdMapping]:
    """Parse IDs_mapping.csv (three stacked tables separated by blank rows)."""
    mappings: list[IdMapping] = []
    seen: set[tuple[str, int]] = set()
    current_table: str | None = None
    try:
        handle = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot open mapping file {path!r}: {exc}") from exc
    with handle:
        for lineno, row in enumerate(csv.reader(handle), start=1):
            if not row or all(not cell.strip() for cell in row):
                current_table = None
                continue
            key = row[0].strip()
            if key in _MAPPING_TABLES:
                current_table = _MAPPING_TABLES[key]
                continue
            if current_table is None:
                raise DataError(
                    f"{path}:{lineno}: row outside any mapping table section"
                )
            if len(row) < 2:
                raise DataError(f"{path}:{lineno}: expected 'id,description'")
            try:
                map_id = int(key)
            except ValueError:
                raise DataError(
                    f"{path}:{lineno}: mapping id {key!r} is not an integer"
                ) from None
            if (current_table, map_id) in seen:
                raise DataError(
                    f"{path}:{lineno}: duplicate mapping ({current_table}, {map_id})"
                )
            seen.add((current_table, map_id))
            mappings.append(IdMapping(current_table, map_id, row[1].strip()))
    return mappings


def mapping_lookup(mappings: Iterable[IdMapping]) -> dict[tuple[str, int], str]:
    """Index mappings by (table, id) for report decoration."""
    return {(m.table, m.id): m.description for m in mappings}


def write_dataset(rows: Iterable[RawEncounter], path: str) -> None:
    """Serialize records back to CSV (used by tooling and round-trip tests)."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow(row.to_row())
