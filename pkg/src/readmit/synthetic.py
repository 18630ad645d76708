"""Seeded synthetic encounter files in the published dataset format.

Useful for demos and integration tests when the real file is not on disk.
The realistic mode plants the qualitative structure reported for the real
data: about 11/35/54 class split, readmission risk driven mainly by the
number of inpatient visits, discharge disposition and admission type, and
short-term vs long-term separation tied to the number of lab procedures.
The single_feature mode makes the readmitted field a pure function of
number_inpatient for importance oracles.
"""

from __future__ import annotations

import csv

import numpy as np

from .ingest import COLUMNS, MEDICATION_COLUMNS

AGE_BRACKETS = tuple(f"[{10 * i}-{10 * (i + 1)})" for i in range(10))

_DIAG_POOL = (
    ("428", 0.10), ("414", 0.09), ("786", 0.06), ("410", 0.05), ("486", 0.05),
    ("682", 0.03), ("250.01", 0.06), ("250.6", 0.04), ("276", 0.05),
    ("401", 0.08), ("599", 0.04), ("715", 0.03), ("780", 0.04), ("V45", 0.03),
    ("E909", 0.01), ("38", 0.02), ("157", 0.02), ("998", 0.03), ("250.83", 0.04),
    ("427", 0.06), ("707", 0.03), ("518", 0.04),
)


def _pick(rng, values, probs, size):
    probs = np.asarray(probs, dtype=np.float64)
    return rng.choice(np.asarray(values, dtype=object), size=size, p=probs / probs.sum())


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def generate_rows(n: int, seed: int, signal: str = "realistic") -> list[list[str]]:
    """Raw CSV rows (lists of strings) in published column order."""
    rng = np.random.default_rng([seed, 0xDA7A])
    enc_ids = rng.permutation(n) + 10_000_000
    patient = rng.integers(1_000_000, 9_999_999, size=n)

    race = _pick(rng, ["Caucasian", "AfricanAmerican", "Hispanic", "Asian", "Other", "?"],
                 [0.745, 0.19, 0.02, 0.006, 0.015, 0.024], n)
    gender = _pick(rng, ["Female", "Male", "Unknown/Invalid"], [0.537, 0.4625, 0.0005], n)
    age = _pick(rng, AGE_BRACKETS,
                [0.001, 0.007, 0.016, 0.037, 0.095, 0.17, 0.222, 0.256, 0.166, 0.03], n)
    weight = np.where(rng.random(n) < 0.97, "?", "[75-100)")
    admission_type = _pick(rng, [1, 2, 3, 5, 6, 8],
                           [0.53, 0.18, 0.19, 0.047, 0.05, 0.003], n).astype(int)
    discharge = _pick(rng, [1, 2, 3, 4, 5, 6, 11, 18, 22, 25],
                      [0.59, 0.026, 0.14, 0.01, 0.012, 0.128, 0.016, 0.036, 0.016, 0.026],
                      n).astype(int)
    source = _pick(rng, [1, 4, 6, 7, 17, 20],
                   [0.29, 0.031, 0.022, 0.57, 0.066, 0.021], n).astype(int)
    time_in_hospital = np.clip(np.rint(rng.gamma(2.2, 2.0, size=n)), 1, 14).astype(int)
    payer = np.where(rng.random(n) < 0.40, "?",
                     _pick(rng, ["MC", "HM", "SP", "BC"], [0.5, 0.2, 0.16, 0.14], n))
    specialty = np.where(rng.random(n) < 0.49, "?",
                         _pick(rng, ["InternalMedicine", "Emergency/Trauma",
                                     "Family/GeneralPractice", "Cardiology"],
                               [0.42, 0.22, 0.21, 0.15], n))
    num_lab = np.clip(np.rint(rng.normal(43, 19, size=n)), 1, 132).astype(int)
    num_proc = _pick(rng, list(range(7)),
                     [0.46, 0.2, 0.12, 0.09, 0.06, 0.04, 0.03], n).astype(int)
    num_meds = np.clip(np.rint(rng.normal(16, 8, size=n)), 1, 81).astype(int)
    n_outpatient = rng.poisson(0.37, size=n)
    n_emergency = rng.poisson(0.2, size=n)
    n_inpatient = rng.poisson(0.64, size=n)
    diags = [_pick(rng, [d for d, _ in _DIAG_POOL], [p for _, p in _DIAG_POOL], n)
             for _ in range(3)]
    diags[1] = np.where(rng.random(n) < 0.004, "?", diags[1])
    diags[2] = np.where(rng.random(n) < 0.014, "?", diags[2])
    n_diag = np.clip(np.rint(rng.normal(7.4, 1.9, size=n)), 1, 16).astype(int)
    glu = _pick(rng, ["None", "Norm", ">200", ">300"], [0.947, 0.025, 0.015, 0.013], n)
    a1c = _pick(rng, ["None", ">8", "Norm", ">7"], [0.833, 0.081, 0.049, 0.037], n)
    insulin = _pick(rng, ["No", "Steady", "Down", "Up"], [0.465, 0.305, 0.118, 0.112], n)
    change = _pick(rng, ["No", "Ch"], [0.539, 0.461], n)
    diabetes_med = _pick(rng, ["Yes", "No"], [0.77, 0.23], n)

    meds = {}
    for med in MEDICATION_COLUMNS:
        if med == "insulin":
            meds[med] = insulin
        elif med in ("examide", "citoglipton"):
            meds[med] = np.full(n, "No", dtype=object)
        elif med in ("metformin", "glipizide", "glyburide", "pioglitazone"):
            meds[med] = _pick(rng, ["No", "Steady", "Up", "Down"],
                              [0.81, 0.16, 0.02, 0.01], n)
        else:
            meds[med] = np.where(rng.random(n) < 0.985, "No", "Steady")

    if signal == "single_feature":
        # readmission is a pure function of number_inpatient
        readmitted = np.where(
            n_inpatient >= 1,
            np.where(rng.random(n) < 0.5, "<30", ">30"),
            "NO",
        )
    elif signal == "realistic":
        risk = (
            0.62 * n_inpatient
            + 0.55 * (discharge == 3)
            + 0.40 * (discharge == 6)
            + 0.28 * (admission_type == 1)
            + 0.30 * n_emergency
            + 0.06 * (time_in_hospital - 4.4)
            + rng.normal(0, 0.35, size=n)
        )
        p_readmit = _sigmoid(risk - 0.92)
        is_readmit = rng.random(n) < p_readmit
        short = (
            0.85 * (num_lab - 43) / 19
            + 0.55 * (discharge == 1)
            + rng.normal(0, 0.4, size=n)
        )
        p_short = _sigmoid(short - 1.62)
        readmitted = np.where(is_readmit,
                              np.where(rng.random(n) < p_short, "<30", ">30"),
                              "NO")
    else:
        raise ValueError(f"unknown signal mode {signal!r}")

    by_name = {
        "encounter_id": enc_ids, "patient_nbr": patient, "race": race,
        "gender": gender, "age": age, "weight": weight,
        "admission_type_id": admission_type,
        "discharge_disposition_id": discharge, "admission_source_id": source,
        "time_in_hospital": time_in_hospital, "payer_code": payer,
        "medical_specialty": specialty, "num_lab_procedures": num_lab,
        "num_procedures": num_proc, "num_medications": num_meds,
        "number_outpatient": n_outpatient, "number_emergency": n_emergency,
        "number_inpatient": n_inpatient,
        "diag_1": diags[0], "diag_2": diags[1], "diag_3": diags[2],
        "number_diagnoses": n_diag, "max_glu_serum": glu, "A1Cresult": a1c,
        "change": change, "diabetesMed": diabetes_med, "readmitted": readmitted,
    }
    by_name.update(meds)
    columns = [by_name[c] for c in COLUMNS]
    return [[str(col[i]) for col in columns] for i in range(n)]


def write_dataset_csv(path: str, n: int, seed: int, signal: str = "realistic") -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(COLUMNS)
        writer.writerows(generate_rows(n, seed, signal))


_MAPPING_SECTIONS = {
    "admission_type_id": {
        1: "Emergency", 2: "Urgent", 3: "Elective", 4: "Newborn",
        5: "Not Available", 6: "NULL", 7: "Trauma Center", 8: "Not Mapped",
    },
    "discharge_disposition_id": {
        1: "Discharged to home",
        2: "Discharged/transferred to another short term hospital",
        3: "Discharged/transferred to SNF",
        4: "Discharged/transferred to ICF",
        5: "Discharged/transferred to another type of inpatient care institution",
        6: "Discharged/transferred to home with home health service",
        11: "Expired",
        18: "NULL",
        22: "Discharged/transferred to another rehab fac",
        25: "Not Mapped",
    },
    "admission_source_id": {
        1: "Physician Referral", 4: "Transfer from a hospital",
        6: "Transfer from another health care facility", 7: "Emergency Room",
        17: "NULL", 20: "Not Mapped",
    },
}


def write_mappings_csv(path: str) -> None:
    """ID-mapping file in the published stacked-sections format."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        first = True
        for table, entries in _MAPPING_SECTIONS.items():
            if not first:
                writer.writerow(["", ""])
            first = False
            writer.writerow([table, "description"])
            for key in sorted(entries):
                writer.writerow([key, entries[key]])
