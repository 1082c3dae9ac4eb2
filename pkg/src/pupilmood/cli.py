"""Command-line front end: simulate | ingest | featurize | evaluate | train | predict.

Commands compose through files only; every run writes a manifest with the
resolved config, its hash, and the seed, so any artifact can be reproduced
from its recorded provenance. Exit codes: 0 success, 2 config error,
3 data error, 4 internal error.
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

import click

from . import __version__
from .config import RunConfig, load_config
from .domain import PirRange
from .errors import ConfigError, DataError, PupilmoodError
from .evaluate import (
    EVAL_CSV_HEADER,
    EnsembleFamily,
    render_table,
    run_baseline_suite,
    run_benchmark,
    training_arrays,
)
from .features import build_day_rows
from .folds import make_fold_plan
from .ingest import (
    atomic_write_text,
    read_feature_csv,
    read_mood_csv,
    read_pir_csv,
    write_feature_csv,
)
from .labeling import daily_moods, join_labels
from .learn import model_io
from .learn.specs import gbdt_params_from
from .learn.stacking import fit_stacked, predict_stacked
from .simgen import funnel_check, generate_cohort

EXIT_CONFIG, EXIT_DATA, EXIT_INTERNAL = 2, 3, 4


def _load(config_path, seed) -> RunConfig:
    return load_config(config_path, seed_override=seed)


def _out_path(out_dir: str, name: str) -> Path:
    return Path(out_dir) / name


def _write_manifest(out_dir: str, command: str, cfg: RunConfig, outputs: list[Path], quiet: bool):
    entries = []
    for path in outputs:
        digest = hashlib.sha256(path.read_bytes()).hexdigest()[:16]
        entries.append({"file": path.name, "sha256_16": digest})
    manifest = {
        "command": command,
        "version": __version__,
        "config_hash": cfg.config_hash(),
        "seed": cfg.eval.seed,
        "resolved_config": cfg.resolved_dict(),
        "outputs": entries,
    }
    atomic_write_text(_out_path(out_dir, f"manifest_{command}.json"), json.dumps(manifest, indent=1) + "\n")
    if not quiet:
        for e in entries:
            click.echo(f"wrote {out_dir}/{e['file']} ({e['sha256_16']})")


def _fail(exc: Exception) -> int:
    if isinstance(exc, ConfigError):
        click.echo(f"config error: {exc}", err=True)
        return EXIT_CONFIG
    if isinstance(exc, DataError):
        click.echo(f"data error: {exc}", err=True)
        return EXIT_DATA
    click.echo(f"internal error: {exc}", err=True)
    return EXIT_INTERNAL


def _common(f):
    f = click.option("--config", "config_path", type=str, default=None, help="YAML run config.")(f)
    f = click.option("--seed", type=int, default=None, help="Override the config seed.")(f)
    f = click.option("--out", "out_dir", type=str, default=".", help="Output directory.")(f)
    f = click.option("--quiet", is_flag=True, default=False)(f)
    return f


@click.group()
@click.version_option(__version__)
def main():
    """Daily mood classification from smartphone PIR streams."""


def _run(command):
    """Wrap a command body with the exit-code contract."""

    def wrapper(**kwargs):
        try:
            command(**kwargs)
        except PupilmoodError as exc:
            sys.exit(_fail(exc))
        except Exception as exc:  # pragma: no cover - defensive
            sys.exit(_fail(exc))

    wrapper.__name__ = command.__name__
    wrapper.__doc__ = command.__doc__
    return wrapper


@main.command()
@_common
@_run
def simulate(config_path, seed, out_dir, quiet):
    """Generate a synthetic cohort (PIR events, mood reports, truth labels)."""
    cfg = _load(config_path, seed)
    files = generate_cohort(cfg.simulate, out_dir)
    if not quiet:
        click.echo(
            f"cohort: {cfg.simulate.n_participants} participants x {cfg.simulate.n_days} days; "
            f"{files.n_emitted_days}/{files.n_scheduled_days} days with PIR data"
        )
    _write_manifest(out_dir, "simulate", cfg, [files.pir_events, files.mood_reports, files.truth_labels], quiet)


@main.command()
@_common
@_run
def ingest(config_path, seed, out_dir, quiet):
    """Validate input files and print the ingest funnel."""
    cfg = _load(config_path, seed)
    events, report = read_pir_csv(_out_path(out_dir, cfg.pir_events), cfg.pir_range)
    reports, diags = read_mood_csv(_out_path(out_dir, cfg.mood_reports))
    funnel = funnel_check(events, cfg.pir_range)
    click.echo(report.summary())
    click.echo(f"mood reports:     {len(reports)} ({len(diags)} rejected rows)")
    if not reports:
        click.echo("warning: no mood reports parsed", err=True)
    click.echo(f"in-range fraction: {1 - funnel.out_of_range_fraction:.4f}")


@main.command()
@_common
@_run
def featurize(config_path, seed, out_dir, quiet):
    """Filter events, build the 48-feature day table, join labels, write CSV."""
    cfg = _load(config_path, seed)
    events, report = read_pir_csv(_out_path(out_dir, cfg.pir_events), cfg.pir_range)
    reports, _ = read_mood_csv(_out_path(out_dir, cfg.mood_reports))
    from .domain import filter_pir

    kept = filter_pir(events, cfg.pir_range).kept
    rows = build_day_rows(kept, boundaries=cfg.periods)
    labeled, join_report = join_labels(rows, daily_moods(reports))
    out = _out_path(out_dir, cfg.features)
    write_feature_csv(labeled, out)
    if not quiet:
        click.echo(
            f"feature days: {join_report.n_feature_days}, mood days: {join_report.n_mood_days}, "
            f"matched: {join_report.n_matched}"
        )
    _write_manifest(out_dir, "featurize", cfg, [out], quiet)


def _ensemble_family(cfg: RunConfig) -> EnsembleFamily:
    return EnsembleFamily(
        base_specs=list(cfg.model.base_specs),
        meta_grid=[dict(g) for g in cfg.model.meta_grid],
        top_k=cfg.model.top_k,
        inner_k=cfg.model.inner_k,
        seed=cfg.eval.seed,
    )


@main.command()
@_common
@click.option("--skip-baselines", is_flag=True, default=False, help="Evaluate only the ensemble.")
@_run
def evaluate(config_path, seed, out_dir, quiet, skip_baselines):
    """Run the baseline suite and the stacking ensemble under shared folds."""
    cfg = _load(config_path, seed)
    rows = read_feature_csv(_out_path(out_dir, cfg.features))
    reports_by_target = {}
    csv_lines = [EVAL_CSV_HEADER]
    for target in cfg.targets:
        X, y, groups = training_arrays(rows, target)
        plan = make_fold_plan(sorted(set(groups)), cfg.eval.k, cfg.eval.seed)
        reports = []
        if not skip_baselines:
            reports.extend(
                run_baseline_suite(
                    rows, target, cfg.model.base_specs, cfg.eval.k, cfg.eval.inner_k, cfg.eval.seed, plan
                )
            )
        reports.append(
            run_benchmark(rows, target, _ensemble_family(cfg), cfg.eval.k, cfg.eval.inner_k, cfg.eval.seed, plan)
        )
        reports_by_target[target] = reports
        for rep in reports:
            csv_lines.extend(rep.csv_rows())

    table = render_table(reports_by_target)
    header = f"config {cfg.config_hash()} seed {cfg.eval.seed}\n"
    report_path = _out_path(out_dir, "eval_report.txt")
    csv_path = _out_path(out_dir, "eval_report.csv")
    atomic_write_text(report_path, header + table + "\n")
    atomic_write_text(csv_path, "\n".join(csv_lines) + "\n")
    if not quiet:
        click.echo(table)
    _write_manifest(out_dir, "evaluate", cfg, [report_path, csv_path], quiet)


@main.command()
@_common
@_run
def train(config_path, seed, out_dir, quiet):
    """Fit the stacking ensemble on all labeled rows and serialize it."""
    cfg = _load(config_path, seed)
    rows = read_feature_csv(_out_path(out_dir, cfg.features))
    outputs = []
    for target in cfg.targets:
        X, y, groups = training_arrays(rows, target)
        model = fit_stacked(
            X,
            y,
            groups,
            base_specs=list(cfg.model.base_specs),
            meta_params=gbdt_params_from(cfg.model.meta_grid[0]),
            top_k=cfg.model.top_k,
            inner_k=cfg.model.inner_k,
            seed=cfg.eval.seed,
        )
        path = _out_path(out_dir, cfg.model_file.format(target=target))
        text = model_io.dump_ensemble(model, {"target": target, "config_hash": cfg.config_hash()})
        atomic_write_text(path, text + "\n")
        outputs.append(path)
    _write_manifest(out_dir, "train", cfg, outputs, quiet)


@main.command()
@_common
@click.option("--model", "model_path", type=str, required=True, help="Serialized model document.")
@_run
def predict(config_path, seed, out_dir, quiet, model_path):
    """Per-day predictions from a serialized model and a feature table."""
    cfg = _load(config_path, seed)
    model_file = Path(model_path)
    if not model_file.exists():
        raise DataError(f"FileNotFound: {model_path}")
    model = model_io.load_ensemble(model_file.read_text(encoding="utf-8"))
    rows = read_feature_csv(_out_path(out_dir, cfg.features))
    import numpy as np

    X = np.array([r.features for r in rows])
    proba = predict_stacked(model, X)
    lines = ["participant_id,date,probability_high,label"]
    for row, p in zip(rows, proba):
        lines.append(
            f"{row.key.participant_id},{row.key.date.isoformat()},{format(p, '.17g')},{1 if p >= 0.5 else 0}"
        )
    out = _out_path(out_dir, cfg.predictions)
    atomic_write_text(out, "\n".join(lines) + "\n")
    _write_manifest(out_dir, "predict", cfg, [out], quiet)


if __name__ == "__main__":
    main()
