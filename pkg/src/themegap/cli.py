"""Command-line interface.

Subcommands cover the pipeline stages: ``ingest-check`` validates inputs,
``mine`` surfaces candidate bigrams for labeling, ``analyze`` writes the
full output tree, ``verify`` recomputes invariants against written output,
``report`` re-renders figures from the delimited files, and ``synth``
generates a demonstration fixture.  Exit codes: 0 success, 2 configuration
error, 3 data error, 4 numeric failure.
"""

from __future__ import annotations

import functools
import json
import logging
import sys
from pathlib import Path

import click

from . import __version__
from .errors import ConfigError, DataError, NumericError, ReportError, ThemegapError
from .csvio import read_embedding_csv, read_series_csv
from .figures import render_scatter, render_series
from .corpus import OutletInfo
from .lexicon import Topic
from .pipeline import (
    MANIFEST_NAME,
    RunConfig,
    analyze,
    apply_overrides,
    load_config,
    load_inputs,
    load_lexicon_file,
    mine,
    selection_stats,
)
from .synth import write_fixture
from .verify import verify_tree

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


def _exit_code(exc: ThemegapError) -> int:
    if isinstance(exc, NumericError):
        return EXIT_NUMERIC
    if isinstance(exc, (DataError, ReportError)):
        return EXIT_DATA
    return EXIT_CONFIG


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ThemegapError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(_exit_code(exc))
    return wrapper


def _build_config(ctx: click.Context, *, need_out: bool = False) -> RunConfig:
    params = ctx.obj
    if params.get("config"):
        cfg = load_config(params["config"])
    else:
        cfg = RunConfig()
    cfg = apply_overrides(cfg, params)
    if need_out and params.get("out") is None and not params.get("config"):
        raise ConfigError("give --config or --out so the output directory is known")
    return cfg


@click.group()
@click.version_option(__version__, prog_name="themegap")
@click.option("--config", type=click.Path(), help="TOML run configuration.")
@click.option("--out", type=click.Path(), help="Output directory (overrides config).")
@click.option("--years", help="Inclusive year range, e.g. 2014..2022.")
@click.option("--topics", help="Comma-separated topic subset.")
@click.option("--mining-threshold", type=int, help="Per-year candidate bigram count floor.")
@click.option("--inclusion-threshold", type=int, help="Per-outlet n-gram count a table row must exceed.")
@click.option("--top-k", type=int, help="Rows per top-k table.")
@click.option("--cluster-threshold", help="Single-linkage distance cutoff, or 'auto'.")
@click.option("--jobs", type=int, help="Parallel workers for unit computation.")
@click.option(
    "--counting", type=click.Choice(["occurrences", "headlines"]),
    help="Count every window, or each n-gram once per headline.",
)
@click.option("--seed", type=int, help="Seed for fixture generation (synth only).")
@click.option("-v", "--verbose", is_flag=True, help="Log at debug level.")
@click.pass_context
def main(ctx: click.Context, **params) -> None:
    """Thematic discrepancy analysis of news headlines."""
    logging.basicConfig(
        level=logging.DEBUG if params.pop("verbose") else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    ctx.obj = params


@main.command("ingest-check")
@click.pass_context
@_guarded
def cmd_ingest_check(ctx: click.Context) -> None:
    """Validate corpus and configuration without writing anything."""
    cfg = _build_config(ctx)
    inputs = load_inputs(cfg)
    click.echo(f"rows: {inputs.n_rows}")
    click.echo(f"malformed: {inputs.n_malformed}")
    click.echo(f"out of range: {inputs.n_filtered}")
    click.echo(f"dropped empty: {inputs.n_dropped_empty}")
    click.echo(f"headlines: {len(inputs.headlines)}")
    per_outlet = {name: 0 for name in inputs.outlet_names}
    for h in inputs.headlines:
        per_outlet[h.outlet] += 1
    for name in inputs.outlet_names:
        click.echo(f"  {name}: {per_outlet[name]}")


@main.command("mine")
@click.pass_context
@_guarded
def cmd_mine(ctx: click.Context) -> None:
    """Mine frequent bigrams and write a report plus lexicon skeleton."""
    cfg = _build_config(ctx, need_out=True)
    summary = mine(cfg)
    click.echo(f"candidates: {len(summary.report)}")
    click.echo(f"report: {summary.report_path}")
    click.echo(f"skeleton: {summary.skeleton_path}")


@main.command("analyze")
@click.pass_context
@_guarded
def cmd_analyze(ctx: click.Context) -> None:
    """Run the full pipeline and write the output tree."""
    cfg = _build_config(ctx, need_out=True)
    summary = analyze(cfg)
    click.echo(f"units ok: {summary.n_ok}")
    click.echo(f"units degenerate: {summary.n_degenerate}")
    click.echo(f"files: {summary.n_files}")
    click.echo(f"manifest: {summary.manifest_path}")


@main.command("verify")
@click.pass_context
@_guarded
def cmd_verify(ctx: click.Context) -> None:
    """Recompute invariants against a written output tree."""
    cfg = _build_config(ctx, need_out=True)
    report = verify_tree(cfg.out_dir)
    for key, reason in sorted(report.skipped.items()):
        click.echo(f"SKIP {key}: {reason}")
    units = sorted({c.unit for c in report.checks})
    for unit in units:
        for c in report.checks:
            if c.unit != unit:
                continue
            status = "ok" if c.ok else "FAIL"
            if c.check == "hash":
                if not c.ok:
                    click.echo(f"FAIL {c.unit} {c.check}: {c.detail}")
            else:
                click.echo(f"{status:4s} {c.unit} {c.check}: {c.detail}")
    n_hash = sum(1 for c in report.checks if c.check == "hash")
    click.echo(f"hashed files: {n_hash}")
    if not report.ok:
        click.echo(f"error: {len(report.failures())} check(s) failed", err=True)
        sys.exit(EXIT_DATA)
    click.echo("all checks passed")


@main.command("report")
@click.pass_context
@_guarded
def cmd_report(ctx: click.Context) -> None:
    """Re-render all figures from the delimited files in the output tree."""
    cfg = _build_config(ctx, need_out=True)
    out = Path(cfg.out_dir)
    manifest_path = out / MANIFEST_NAME
    if not manifest_path.is_file():
        raise DataError(f"no {MANIFEST_NAME} under {out}; run analyze first")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    topic_by_value = {t.value: t for t in Topic}
    n_rendered = 0
    for key, entry in sorted(manifest.get("units", {}).items()):
        if entry.get("status") != "ok":
            continue
        topic_value, _, year_s = key.partition("/")
        topic = topic_by_value[topic_value]
        unit_dir = out / topic_value / year_s
        with open(unit_dir / "embedding.csv", encoding="utf-8", newline="") as fh, \
             open(unit_dir / "scree.csv", encoding="utf-8", newline="") as sfh:
            emb, leanings = read_embedding_csv(fh, topic, int(year_s), sfh)
        outlets = [OutletInfo(name, leaning) for name, leaning in leanings.items()]
        blob = render_scatter(
            emb, outlets, width=cfg.figure_width, height=cfg.figure_height,
        )
        (unit_dir / "scatter.svg").write_bytes(blob)
        n_rendered += 1
    for csv_path in sorted(out.glob("*/series_*.csv")):
        with open(csv_path, encoding="utf-8", newline="") as fh:
            series_list = read_series_csv(fh)
        drawable = [s for s in series_list if s.defined_years()]
        if not drawable:
            continue
        s = drawable[0]
        if s.outlet:
            title = f"{s.topic.value}: {s.outlet} distance to major-cluster centroid"
        else:
            title = f"{s.topic.value}: cluster dispersion by year"
        blob = render_series(
            drawable, width=cfg.figure_width, height=cfg.figure_height, title=title,
        )
        csv_path.with_suffix(".svg").write_bytes(blob)
        n_rendered += 1
    click.echo(f"figures rendered: {n_rendered}")


@main.command("synth")
@click.option("--headlines", type=int, default=10_000, show_default=True,
              help="Corpus size to generate.")
@click.pass_context
@_guarded
def cmd_synth(ctx: click.Context, headlines: int) -> None:
    """Generate a synthetic demonstration fixture (corpus, configs, lexicon)."""
    params = ctx.obj
    if params.get("out") is None:
        raise ConfigError("synth needs --out for the fixture directory")
    seed = params.get("seed")
    config_path = write_fixture(
        params["out"], seed=seed if seed is not None else 0, n_headlines=headlines,
    )
    click.echo(f"fixture config: {config_path}")


@main.command("select-stats")
@click.pass_context
@_guarded
def cmd_select_stats(ctx: click.Context) -> None:
    """Report selection coverage and multi-topic overlap for the lexicon."""
    cfg = _build_config(ctx)
    inputs = load_inputs(cfg)
    lexicon = load_lexicon_file(cfg, inputs.normalizer)
    stats = selection_stats(inputs.headlines, lexicon, assignment=cfg.assignment)
    click.echo(f"headlines: {stats.n_headlines}")
    click.echo(f"selected: {stats.n_selected}")
    click.echo(f"multi-topic: {stats.n_multi_topic}")
    for topic in Topic:
        click.echo(f"  {topic.value}: {stats.per_topic[topic]}")


if __name__ == "__main__":
    main()
