"""End-to-end orchestration shared by the CLI commands.

Every report is machine-readable (JSON/CSV), embeds the seed and config
hash, and is byte-identical across reruns with the same config; wall-clock
timestamps live only in run_manifest.json.
"""

from __future__ import annotations

import csv
import json
import logging
import os
from dataclasses import dataclass

import numpy as np

from . import ingest
from .config import RunConfig
from .cost import (CostParams, ThresholdResult, extrapolate_total,
                   optimize_threshold, saved_cost)
from .errors import DataError
from .feature_analysis import AblationReport, AblationTask, ablation_study
from .ingest import READMITTED_VALUES, RawEncounter
from .metrics import confusion, pr_curve
from .models import save_model, train_model
from .models.forest import ForestParams
from .preprocess import (Dataset, SplitPlan, Task, build_schema, build_vectors,
                         class_distribution, make_split, partition_filtered)
from .rules import class_stats, mine_class_sensitive, transactions_from_raw

log = logging.getLogger(__name__)


@dataclass
class Prepared:
    config: RunConfig
    raw_rows: list[RawEncounter]
    filter_counts: "object"
    dataset: Dataset          # filtered + encoded
    split: SplitPlan
    mappings: dict[tuple[str, int], str]


def prepare(config: RunConfig) -> Prepared:
    """Load, filter, freeze the schema on training rows, encode, split.

    The split stratifies on the raw three-way readmitted field, which keeps
    the label mix of both binary tasks stable at once.
    """
    rows = ingest.load_dataset(config.dataset)
    kept, counts = partition_filtered(rows)
    if not kept:
        raise DataError("no rows survive the missing race/diagnosis filter")
    ids = np.array([r.encounter_id for r in kept], dtype=np.int64)
    readmit = np.array([READMITTED_VALUES.index(r.readmitted) for r in kept],
                       dtype=np.uint8)
    split = make_split(ids, config.seed, labels=readmit,
                       train_fraction=config.train_fraction,
                       n_folds=config.cv_folds)
    train_id_set = set(split.train_ids.tolist())
    train_rows = [r for r in kept if r.encounter_id in train_id_set]
    schema = build_schema(train_rows)
    dataset = build_vectors(kept, schema)

    mappings: dict[tuple[str, int], str] = {}
    if os.path.exists(config.mappings):
        mappings = ingest.mapping_lookup(ingest.load_id_mappings(config.mappings))
    else:
        log.warning("mapping file %s not found; reports will not be decorated",
                    config.mappings)
    return Prepared(config, rows, counts, dataset, split, mappings)


def _stamp(config: RunConfig, payload: dict) -> dict:
    payload["seed"] = config.seed
    payload["config_hash"] = config.hash()
    return payload


def write_json(path: str, payload: dict) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def write_csv(path: str, header: list[str], rows: list) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def run_preprocess(config: RunConfig, prepared: Prepared | None = None) -> dict:
    """Preprocessing report + byte-stable cached encoded dataset."""
    prepared = prepared or prepare(config)
    counts = prepared.filter_counts
    missing_by_field = {}
    for column in ingest.COLUMNS[2:]:
        missing_by_field[column] = sum(
            1 for r in prepared.raw_rows
            if r.get(column) in ("?", ""))
    report = _stamp(config, {
        "rows_in": counts.rows_in,
        "removed_missing_race": counts.removed_missing_race,
        "removed_missing_diagnosis": counts.removed_missing_diag,
        "rows_out": counts.rows_out,
        "missing_values_per_field": missing_by_field,
        "class_distribution_raw": class_distribution(np.array(
            [READMITTED_VALUES.index(r.readmitted) for r in prepared.raw_rows],
            dtype=np.uint8)),
        "class_distribution_filtered": class_distribution(prepared.dataset.readmitted),
        "n_train": len(prepared.split.train_ids),
        "n_test": len(prepared.split.test_ids),
        "schema": prepared.dataset.schema.to_jsonable(),
        "schema_fingerprint": prepared.dataset.schema.fingerprint(),
        "warnings": {
            "unseen_nominal": prepared.dataset.stats.unseen_nominal,
            "unparseable_diagnosis": prepared.dataset.stats.unparseable_diag,
            "insulin_missing_as_no": prepared.dataset.stats.insulin_missing,
        },
    })
    write_json(os.path.join(config.out, "preprocess_report.json"), report)
    prepared.dataset.save(os.path.join(config.out, "cache"))
    return report


def run_train_eval(config: RunConfig, prepared: Prepared | None = None,
                   save_models: bool = True) -> dict:
    """Train the selected models per task, emit PR curves and the AUPRC table.

    Returns {(task_name, model_kind): {"scorer", "scores", "labels", "auprc"}}.
    """
    prepared = prepared or prepare(config)
    dataset = prepared.dataset
    train_ds = dataset.subset_by_ids(prepared.split.train_ids)
    test_ds = dataset.subset_by_ids(prepared.split.test_ids)
    results = {}
    table: dict[str, dict[str, float]] = {}
    for task_name in config.tasks():
        task = Task(task_name)
        y_test = test_ds.labels(task)
        for kind in config.models():
            log.info("training %s for task %s", kind, task_name)
            scorer = train_model(kind, train_ds, task, config.seed,
                                 config.model_options(kind))
            scores = scorer.score(test_ds)
            curve = pr_curve(scores, y_test)
            write_csv(
                os.path.join(config.out, f"pr_curve_{kind}_{task_name}.csv"),
                ["threshold", "recall", "precision"], curve.to_csv_rows())
            if save_models:
                save_model(scorer, os.path.join(
                    config.out, "models", f"{kind}_{task_name}.json"))
            table.setdefault(kind, {})[task_name] = curve.area
            results[(task_name, kind)] = {
                "scorer": scorer, "scores": scores, "labels": y_test,
                "auprc": curve.area,
            }
    payload = _stamp(config, {
        "auprc": table,
        "n_train": len(train_ds),
        "n_test": len(test_ds),
        "chance_level": {
            t: float(np.mean(test_ds.labels(Task(t)))) for t in config.tasks()
        },
    })
    write_json(os.path.join(config.out, "auprc_table.json"), payload)
    write_csv(
        os.path.join(config.out, "auprc_table.csv"),
        ["model"] + config.tasks(),
        [[kind] + [table[kind].get(t, "") for t in config.tasks()]
         for kind in config.models()],
    )
    return results


def run_ablation(config: RunConfig, prepared: Prepared | None = None) -> dict[str, AblationReport]:
    """Ablation importance reports for both framings."""
    prepared = prepared or prepare(config)
    params = ForestParams(n_trees=config.forest_trees, max_depth=config.forest_depth,
                          features_per_split=config.forest_features, seed=config.seed)
    reports = {}
    for task in (AblationTask.HIGH_RISK, AblationTask.DIFFERENTIATE):
        report = ablation_study(prepared.dataset, task, params,
                                subsample_fraction=config.ablation_subsample)
        reports[task.value] = report
        write_json(os.path.join(config.out, f"ablation_{task.value}.json"),
                   _stamp(config, report.to_jsonable()))
        write_csv(
            os.path.join(config.out, f"ablation_{task.value}.csv"),
            ["feature", "baseline_oob_error", "oob_error_without", "importance"],
            [[r.feature, report.baseline_oob_error, r.oob_error_without, r.importance]
             for r in report.rows])
        write_csv(
            os.path.join(config.out, f"ablation_{task.value}_sorted.csv"),
            ["feature", "baseline_oob_error", "oob_error_without", "importance"],
            [[r.feature, report.baseline_oob_error, r.oob_error_without, r.importance]
             for r in report.sorted_by_importance()])
    return reports


def _decorate_item(item, mappings) -> str:
    table = {
        "admission_type_id": "admission_type",
        "discharge_disposition_id": "discharge_disposition",
        "admission_source_id": "admission_source",
    }.get(item.feature)
    if table is not None:
        try:
            description = mappings.get((table, int(float(item.value))))
        except ValueError:
            description = None
        if description:
            return f"{item} ({description})"
    return str(item)


def run_rules(config: RunConfig, prepared: Prepared | None = None) -> list:
    """Class-sensitive Apriori mining with full-dataset class fractions."""
    prepared = prepared or prepare(config)
    transactions = transactions_from_raw(prepared.raw_rows)
    mined = mine_class_sensitive(transactions, config.rules_class,
                                 config.rules_min_support, config.rules_max_len)
    stats = class_stats(mined, transactions)
    class_tag = {"<30": "lt30", ">30": "gt30", "NO": "no",
                 "READMITTED": "readmitted"}[config.rules_class]
    write_csv(
        os.path.join(config.out, f"rules_{class_tag}.csv"),
        ["itemset", "pct_lt30", "pct_gt30", "pct_no", "total_matches"],
        [[str(r.itemset), round(100 * r.fraction_lt30, 2),
          round(100 * r.fraction_gt30, 2), round(100 * r.fraction_no, 2),
          r.total_matches] for r in stats])
    payload = _stamp(config, {
        "mined_class": config.rules_class,
        "min_support": config.rules_min_support,
        "max_len": config.rules_max_len,
        "n_rows": transactions.n_rows,
        "class_totals": {
            v: int(np.count_nonzero(transactions.readmitted == c))
            for c, v in enumerate(READMITTED_VALUES)
        },
        "rules": [
            {
                "items": [str(i) for i in r.itemset.items],
                "items_decorated": [_decorate_item(i, prepared.mappings)
                                    for i in r.itemset.items],
                "support_in_class": r.itemset.support_count,
                "total_matches": r.total_matches,
                # the fractions double as confidence of itemset => class
                "fraction_lt30": r.fraction_lt30,
                "fraction_gt30": r.fraction_gt30,
                "fraction_no": r.fraction_no,
            }
            for r in stats
        ],
    })
    write_json(os.path.join(config.out, f"rules_{class_tag}.json"), payload)
    return stats


def _tune_honest(config: RunConfig, prepared: Prepared, kind: str,
                 test_ds: Dataset, y_test: np.ndarray,
                 params: CostParams) -> ThresholdResult:
    """Tune the threshold on a validation carve-out, report on the test set."""
    task = Task.ANY_READMISSION
    dataset = prepared.dataset
    train_ds = dataset.subset_by_ids(prepared.split.train_ids)
    carve = make_split(prepared.split.train_ids, config.seed,
                       labels=train_ds.labels(task), train_fraction=0.75)
    fit_ds = dataset.subset_by_ids(carve.train_ids)
    val_ds = dataset.subset_by_ids(carve.test_ids)
    scorer = train_model(kind, fit_ds, task, config.seed, config.model_options(kind))
    tuned = optimize_threshold(scorer.score(val_ds), val_ds.labels(task), params)
    cm = confusion(scorer.score(test_ds), y_test, tuned.threshold)
    result = ThresholdResult(tuned.threshold, saved_cost(cm, params), cm)
    result.extrapolated_total = extrapolate_total(
        result.saved_cost_test, len(y_test), len(dataset))
    return result


def run_cost(config: RunConfig, prepared: Prepared | None = None,
             trained: dict | None = None) -> dict:
    """Cost-sensitive threshold report per model (ANY_READMISSION framing)."""
    prepared = prepared or prepare(config)
    params = CostParams(config.cost_alpha, config.cost_beta)
    task = Task.ANY_READMISSION
    dataset = prepared.dataset
    train_ds = dataset.subset_by_ids(prepared.split.train_ids)
    test_ds = dataset.subset_by_ids(prepared.split.test_ids)
    y_test = test_ds.labels(task)
    per_model = {}
    for kind in config.models():
        cached = (trained or {}).get((task.value, kind))
        if cached is not None:
            scores = cached["scores"]
        else:
            log.info("training %s for cost analysis", kind)
            scorer = train_model(kind, train_ds, task, config.seed,
                                 config.model_options(kind))
            scores = scorer.score(test_ds)
        result = optimize_threshold(scores, y_test, params)
        result.extrapolated_total = extrapolate_total(
            result.saved_cost_test, len(y_test), len(dataset))
        entry = {"paper_mode": result.to_jsonable()}
        if config.cost_honest:
            entry["honest_mode"] = _tune_honest(
                config, prepared, kind, test_ds, y_test, params).to_jsonable()
        per_model[kind] = entry
    payload = _stamp(config, {
        "alpha": config.cost_alpha,
        "beta": config.cost_beta,
        "task": task.value,
        "n_test": len(test_ds),
        "n_total": len(dataset),
        "models": per_model,
    })
    write_json(os.path.join(config.out, "cost_report.json"), payload)
    write_csv(
        os.path.join(config.out, "cost_report.csv"),
        ["model", "threshold", "saved_cost_test", "extrapolated_total"],
        [[kind,
          entry["paper_mode"]["threshold"],
          entry["paper_mode"]["saved_cost_test"],
          entry["paper_mode"]["extrapolated_total"]]
         for kind, entry in per_model.items()])
    return payload


def run_reproduce(config: RunConfig) -> dict:
    """The whole pipeline into one output directory, reusing trained models."""
    prepared = prepare(config)
    run_preprocess(config, prepared)
    trained = run_train_eval(config, prepared)
    run_ablation(config, prepared)
    run_rules(config, prepared)
    cost_report = run_cost(config, prepared, trained)
    return cost_report
