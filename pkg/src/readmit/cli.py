"""Batch CLI: preprocess, train-eval, ablation, rules, cost, reproduce.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import datetime
import functools
import logging
import sys

import click

from . import __version__, pipeline
from .config import MODEL_CHOICES, TASK_CHOICES, load_config
from .errors import ReadmitError
from .pipeline import write_json


def _common_options(fn):
    @click.option("--config", "config_path", type=str, default=None,
                  help="Key = value config file.")
    @click.option("--dataset", type=str, default=None, help="Encounter CSV path.")
    @click.option("--mappings", type=str, default=None, help="IDs_mapping.csv path.")
    @click.option("--seed", type=int, default=None, help="Master RNG seed.")
    @click.option("--out", type=str, default=None, help="Output directory.")
    @click.option("--model", type=click.Choice(MODEL_CHOICES), default=None)
    @click.option("--task", type=click.Choice(TASK_CHOICES), default=None)
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        return fn(*args, **kwargs)

    return wrapper


def _resolve(config_path, **overrides):
    return load_config(config_path, **overrides)


def _manifest(config, command: str) -> None:
    write_json(f"{config.out}/run_manifest.json", {
        "command": command,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "version": __version__,
        "seed": config.seed,
        "config_hash": config.hash(),
        "config": config.to_text(),
    })


@click.group()
def cli():
    """Readmission-risk pipeline for diabetic patient encounters."""
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")


@cli.command()
@_common_options
def preprocess(config_path, dataset, mappings, seed, out, model, task):
    """Filter/encode the dataset; emit the preprocessing report and cache."""
    config = _resolve(config_path, dataset=dataset, mappings=mappings, seed=seed,
                      out=out, model=model, task=task)
    report = pipeline.run_preprocess(config)
    _manifest(config, "preprocess")
    click.echo(f"rows in: {report['rows_in']}  rows out: {report['rows_out']}")
    click.echo(f"class distribution (filtered): {report['class_distribution_filtered']}")


@cli.command("train-eval")
@_common_options
def train_eval(config_path, dataset, mappings, seed, out, model, task):
    """Train the learners, emit PR curves and the AUPRC table."""
    config = _resolve(config_path, dataset=dataset, mappings=mappings, seed=seed,
                      out=out, model=model, task=task)
    results = pipeline.run_train_eval(config)
    _manifest(config, "train-eval")
    for (task_name, kind), entry in results.items():
        click.echo(f"AUPRC {kind} [{task_name}]: {entry['auprc']:.4f}")


@cli.command()
@_common_options
def ablation(config_path, dataset, mappings, seed, out, model, task):
    """Ablation feature importance for both framings."""
    config = _resolve(config_path, dataset=dataset, mappings=mappings, seed=seed,
                      out=out, model=model, task=task)
    reports = pipeline.run_ablation(config)
    _manifest(config, "ablation")
    for name, report in reports.items():
        top = ", ".join(r.feature for r in report.sorted_by_importance()[:3])
        click.echo(f"{name}: baseline OOB {report.baseline_oob_error:.4f}; top: {top}")


@cli.command()
@_common_options
def rules(config_path, dataset, mappings, seed, out, model, task):
    """Class-sensitive association rules with class-wise match fractions."""
    config = _resolve(config_path, dataset=dataset, mappings=mappings, seed=seed,
                      out=out, model=model, task=task)
    stats = pipeline.run_rules(config)
    _manifest(config, "rules")
    click.echo(f"mined {len(stats)} rules for class {config.rules_class}")


@cli.command()
@_common_options
def cost(config_path, dataset, mappings, seed, out, model, task):
    """Cost-sensitive threshold optimization and savings report."""
    config = _resolve(config_path, dataset=dataset, mappings=mappings, seed=seed,
                      out=out, model=model, task=task)
    report = pipeline.run_cost(config)
    _manifest(config, "cost")
    for kind, entry in report["models"].items():
        paper = entry["paper_mode"]
        click.echo(f"{kind}: threshold {paper['threshold']:.4f} "
                   f"saved ${paper['saved_cost_test']:,.0f} "
                   f"(extrapolated ${paper['extrapolated_total']:,.0f})")


@cli.command()
@_common_options
def reproduce(config_path, dataset, mappings, seed, out, model, task):
    """Run the full pipeline into one output directory."""
    config = _resolve(config_path, dataset=dataset, mappings=mappings, seed=seed,
                      out=out, model=model, task=task)
    pipeline.run_reproduce(config)
    _manifest(config, "reproduce")
    click.echo(f"reports written to {config.out}")


def main(argv: list[str] | None = None) -> int:
    """Entry point with the documented exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        return 1
    except ReadmitError as exc:
        click.echo(f"error: {exc}", err=True)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
