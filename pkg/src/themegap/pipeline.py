"""Run configuration and the end-to-end analysis pipeline.

``analyze`` drives ingestion through reporting for every configured
(topic, year) unit and finishes by writing a manifest with content hashes
of every output file.  Units are independent, so they may be computed in a
process pool; all files are written serially in a fixed order afterwards,
which keeps the output tree byte-identical regardless of the parallelism
degree.
"""

from __future__ import annotations

import dataclasses
import datetime
import hashlib
import io
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence

from . import __version__
from .ca import CaEmbedding, ca_embed
from .contingency import (
    DEFAULT_INCLUSION_THRESHOLD,
    build_table,
    ContingencyTable,
)
from .corpus import (
    DEFAULT_DATE_RANGE,
    DEFAULT_MAX_MALFORMED,
    CorpusFormat,
    Headline,
    Lemmatizer,
    OutletInfo,
    TextNormalizer,
    build_headlines,
    default_lemma_exceptions,
    default_stoplist,
    detect_format,
    ingest,
    load_outlets,
    parse_lemma_exceptions,
    parse_stoplist,
)
from .csvio import (
    write_embedding_csv,
    write_lexicon_skeleton,
    write_mining_csv,
    write_scree_csv,
    write_series_csv,
    write_table_csv,
)
from .errors import ConfigError, DataError, DegenerateUnitError
from .figures import DEFAULT_HEIGHT, DEFAULT_WIDTH, render_scatter, render_series
from .lexicon import (
    DEFAULT_MINING_THRESHOLD,
    MiningReport,
    SelectionStats,
    Topic,
    TopicLexicon,
    load_lexicon,
    mine_frequent_bigrams,
    select_relevant,
    selection_stats,
)
from .metrics import (
    AUTO_THRESHOLD,
    ClusterAssignment,
    DiscrepancySeries,
    MetricUndefinedError,
    SeriesKind,
    centroid_distance,
    cluster_mad,
    find_clusters,
)
from .topk import DEFAULT_TOP_K, top_k, render_markdown

logger = logging.getLogger(__name__)

MANIFEST_NAME = "run_manifest.json"

_TOPIC_BY_VALUE = {t.value: t for t in Topic}

_CONFIG_SECTIONS = {
    "inputs": {"corpus", "outlets", "lexicon", "stoplist", "lemma_exceptions", "corpus_format"},
    "analysis": {
        "years", "date_range", "topics", "mining_threshold", "inclusion_threshold",
        "top_k", "cluster_threshold", "mad_scope", "counting", "assignment",
        "centroid_outlets", "max_malformed_fraction",
    },
    "output": {"dir", "figure_width", "figure_height"},
    "execution": {"jobs"},
}


def parse_years(text: str) -> tuple[int, int]:
    """Parse an inclusive ``A..B`` year range."""
    parts = text.split("..")
    try:
        if len(parts) != 2:
            raise ValueError
        a, b = int(parts[0]), int(parts[1])
    except ValueError:
        raise ConfigError(f"years must look like 2014..2022, got {text!r}") from None
    if a > b:
        raise ConfigError(f"empty year range {text!r}")
    return a, b


def parse_topics(value: Any) -> tuple[Topic, ...]:
    if isinstance(value, str):
        value = [v.strip() for v in value.split(",") if v.strip()]
    topics = []
    for v in value:
        t = _TOPIC_BY_VALUE.get(v)
        if t is None:
            raise ConfigError(
                f"unknown topic {v!r} (expected " + "/".join(_TOPIC_BY_VALUE) + ")"
            )
        if t in topics:
            raise ConfigError(f"topic {v!r} listed twice")
        topics.append(t)
    if not topics:
        raise ConfigError("at least one topic is required")
    return tuple(topics)


def parse_cluster_threshold(value: Any) -> float | str:
    if value == AUTO_THRESHOLD:
        return AUTO_THRESHOLD
    try:
        tau = float(value)
    except (TypeError, ValueError):
        raise ConfigError(
            f"cluster_threshold must be a number or 'auto', got {value!r}"
        ) from None
    if tau < 0:
        raise ConfigError("cluster_threshold must be >= 0")
    return tau


@dataclass
class RunConfig:
    """Everything one run needs; file paths are resolved and absolute."""

    corpus: Path | None = None
    outlets: Path | None = None
    lexicon: Path | None = None
    stoplist: Path | None = None
    lemma_exceptions: Path | None = None
    corpus_format: CorpusFormat | None = None
    years: tuple[int, int] = (2014, 2022)
    date_range: tuple[datetime.date, datetime.date] = DEFAULT_DATE_RANGE
    topics: tuple[Topic, ...] = tuple(Topic)
    mining_threshold: int = DEFAULT_MINING_THRESHOLD
    inclusion_threshold: int = DEFAULT_INCLUSION_THRESHOLD
    top_k: int = DEFAULT_TOP_K
    cluster_threshold: float | str = AUTO_THRESHOLD
    mad_scope: str = "all"
    counting: str = "occurrences"
    assignment: str = "all"
    centroid_outlets: tuple[str, ...] | str = "all"
    max_malformed_fraction: float = DEFAULT_MAX_MALFORMED
    out_dir: Path = Path("out")
    figure_width: int = DEFAULT_WIDTH
    figure_height: int = DEFAULT_HEIGHT
    jobs: int = 1

    def year_list(self) -> list[int]:
        return list(range(self.years[0], self.years[1] + 1))

    def validate(self, *, need_corpus: bool = False, need_lexicon: bool = False) -> None:
        if need_corpus:
            for label in ("corpus", "outlets"):
                p = getattr(self, label)
                if p is None:
                    raise ConfigError(f"no {label} path configured")
                if not Path(p).is_file():
                    raise ConfigError(f"{label} file not found: {p}")
        if need_lexicon:
            if self.lexicon is None:
                raise ConfigError("no lexicon path configured")
            if not Path(self.lexicon).is_file():
                raise ConfigError(f"lexicon file not found: {self.lexicon}")
        for label in ("stoplist", "lemma_exceptions"):
            p = getattr(self, label)
            if p is not None and not Path(p).is_file():
                raise ConfigError(f"{label} file not found: {p}")
        if self.mining_threshold < 1:
            raise ConfigError("mining_threshold must be >= 1")
        if self.inclusion_threshold < 0:
            raise ConfigError("inclusion_threshold must be >= 0")
        if self.top_k < 1:
            raise ConfigError("top_k must be >= 1")
        if self.mad_scope not in ("all", "major"):
            raise ConfigError(f"mad_scope must be 'all' or 'major', got {self.mad_scope!r}")
        if self.counting not in ("occurrences", "headlines"):
            raise ConfigError(
                f"counting must be 'occurrences' or 'headlines', got {self.counting!r}"
            )
        if self.assignment not in ("all", "first"):
            raise ConfigError(
                f"assignment must be 'all' or 'first', got {self.assignment!r}"
            )
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if not (0.0 <= self.max_malformed_fraction <= 1.0):
            raise ConfigError("max_malformed_fraction must be within [0, 1]")
        if self.figure_width < 100 or self.figure_height < 100:
            raise ConfigError("figure dimensions must be at least 100x100")
        if self.date_range[0] > self.date_range[1]:
            raise ConfigError("date_range start is after its end")
        parse_cluster_threshold(self.cluster_threshold)

    def echo(self) -> dict[str, Any]:
        """Manifest form of the configuration.

        Execution details that cannot change the outputs (the output
        directory itself, the parallelism degree) are deliberately left
        out so reruns of one configuration stay byte-comparable.
        """
        return {
            "corpus": str(self.corpus) if self.corpus else None,
            "outlets": str(self.outlets) if self.outlets else None,
            "lexicon": str(self.lexicon) if self.lexicon else None,
            "stoplist": str(self.stoplist) if self.stoplist else None,
            "lemma_exceptions": str(self.lemma_exceptions) if self.lemma_exceptions else None,
            "corpus_format": self.corpus_format.value if self.corpus_format else None,
            "years": list(self.years),
            "date_range": [d.isoformat() for d in self.date_range],
            "topics": [t.value for t in self.topics],
            "mining_threshold": self.mining_threshold,
            "inclusion_threshold": self.inclusion_threshold,
            "top_k": self.top_k,
            "cluster_threshold": self.cluster_threshold,
            "mad_scope": self.mad_scope,
            "counting": self.counting,
            "assignment": self.assignment,
            "centroid_outlets": (
                list(self.centroid_outlets)
                if isinstance(self.centroid_outlets, tuple) else self.centroid_outlets
            ),
            "max_malformed_fraction": self.max_malformed_fraction,
            "figure_width": self.figure_width,
            "figure_height": self.figure_height,
        }


def _load_toml(path: Path) -> dict[str, Any]:
    try:
        import tomllib  # type: ignore[import-not-found]
    except ModuleNotFoundError:
        import tomli as tomllib
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"bad config {path}: {exc}") from exc


def load_config(path: str | Path) -> RunConfig:
    """Load a TOML run configuration.

    Relative paths in the file are resolved against the file's directory,
    so a fixture directory can be moved as a whole.  Unknown sections or
    keys are configuration errors rather than silent typos.
    """
    path = Path(path)
    doc = _load_toml(path)
    base = path.parent
    for section, keys in doc.items():
        if section not in _CONFIG_SECTIONS:
            raise ConfigError(f"{path}: unknown config section [{section}]")
        if not isinstance(keys, dict):
            raise ConfigError(f"{path}: [{section}] must be a table")
        unknown = set(keys) - _CONFIG_SECTIONS[section]
        if unknown:
            raise ConfigError(
                f"{path}: unknown key(s) in [{section}]: " + ", ".join(sorted(unknown))
            )

    cfg = RunConfig()
    inputs = doc.get("inputs", {})

    def respath(value: Any, label: str) -> Path:
        if not isinstance(value, str) or not value:
            raise ConfigError(f"{path}: inputs.{label} must be a path string")
        p = Path(value)
        return (base / p).resolve() if not p.is_absolute() else p

    for label in ("corpus", "outlets", "lexicon", "stoplist", "lemma_exceptions"):
        if label in inputs:
            setattr(cfg, label, respath(inputs[label], label))
    if "corpus_format" in inputs:
        try:
            cfg.corpus_format = CorpusFormat(inputs["corpus_format"])
        except ValueError:
            raise ConfigError(
                f"{path}: corpus_format must be jsonl or csv, got {inputs['corpus_format']!r}"
            ) from None

    analysis = doc.get("analysis", {})
    if "years" in analysis:
        cfg.years = parse_years(str(analysis["years"]))
        cfg.date_range = (
            datetime.date(cfg.years[0], 1, 1), datetime.date(cfg.years[1], 12, 31)
        )
    if "date_range" in analysis:
        raw = analysis["date_range"]
        try:
            lo, hi = (datetime.date.fromisoformat(str(x)) for x in raw)
        except (TypeError, ValueError):
            raise ConfigError(
                f"{path}: date_range must be two YYYY-MM-DD strings"
            ) from None
        cfg.date_range = (lo, hi)
    if "topics" in analysis:
        cfg.topics = parse_topics(analysis["topics"])
    for key in (
        "mining_threshold", "inclusion_threshold", "top_k",
        "mad_scope", "counting", "assignment", "max_malformed_fraction",
    ):
        if key in analysis:
            setattr(cfg, key, analysis[key])
    if "cluster_threshold" in analysis:
        cfg.cluster_threshold = parse_cluster_threshold(analysis["cluster_threshold"])
    if "centroid_outlets" in analysis:
        raw = analysis["centroid_outlets"]
        if raw == "all":
            cfg.centroid_outlets = "all"
        elif isinstance(raw, list) and all(isinstance(x, str) for x in raw):
            cfg.centroid_outlets = tuple(raw)
        else:
            raise ConfigError(f"{path}: centroid_outlets must be 'all' or a list of names")

    output = doc.get("output", {})
    if "dir" in output:
        p = Path(str(output["dir"]))
        cfg.out_dir = (base / p).resolve() if not p.is_absolute() else p
    for key in ("figure_width", "figure_height"):
        if key in output:
            setattr(cfg, key, output[key])
    if "jobs" in doc.get("execution", {}):
        cfg.jobs = doc["execution"]["jobs"]
    return cfg


def apply_overrides(cfg: RunConfig, overrides: Mapping[str, Any]) -> RunConfig:
    """Apply command-line overrides; values of None mean 'not given'."""
    cfg = dataclasses.replace(cfg)
    if overrides.get("out") is not None:
        cfg.out_dir = Path(overrides["out"]).resolve()
    if overrides.get("years") is not None:
        cfg.years = parse_years(overrides["years"])
        cfg.date_range = (
            datetime.date(cfg.years[0], 1, 1), datetime.date(cfg.years[1], 12, 31)
        )
    if overrides.get("topics") is not None:
        cfg.topics = parse_topics(overrides["topics"])
    for key in ("mining_threshold", "inclusion_threshold", "top_k", "jobs", "counting"):
        if overrides.get(key) is not None:
            setattr(cfg, key, overrides[key])
    if overrides.get("cluster_threshold") is not None:
        cfg.cluster_threshold = parse_cluster_threshold(overrides["cluster_threshold"])
    return cfg


@dataclass
class LoadedInputs:
    outlets: list[OutletInfo]
    normalizer: TextNormalizer
    headlines: list[Headline]
    n_rows: int
    n_malformed: int
    n_filtered: int
    n_dropped_empty: int

    @property
    def outlet_names(self) -> tuple[str, ...]:
        return tuple(o.name for o in self.outlets)


def load_inputs(cfg: RunConfig) -> LoadedInputs:
    """Ingest and normalize the corpus; headlines outside the year range drop."""
    cfg.validate(need_corpus=True)
    outlets = load_outlets(cfg.outlets)
    stoplist = (
        parse_stoplist(Path(cfg.stoplist).read_text(encoding="utf-8"))
        if cfg.stoplist else default_stoplist()
    )
    exceptions = (
        parse_lemma_exceptions(Path(cfg.lemma_exceptions).read_text(encoding="utf-8"))
        if cfg.lemma_exceptions else default_lemma_exceptions()
    )
    normalizer = TextNormalizer(stoplist, Lemmatizer(exceptions))
    fmt = cfg.corpus_format or detect_format(cfg.corpus)
    with open(cfg.corpus, "rb") as fh:
        result = ingest(
            fh, fmt,
            date_range=cfg.date_range,
            max_malformed_fraction=cfg.max_malformed_fraction,
        )
    build = build_headlines(result.records, outlets, normalizer)
    lo, hi = cfg.years
    headlines = [h for h in build.headlines if lo <= h.year <= hi]
    return LoadedInputs(
        outlets, normalizer, headlines,
        result.n_rows, result.n_malformed, result.n_filtered, build.n_dropped_empty,
    )


def load_lexicon_file(cfg: RunConfig, normalizer: TextNormalizer) -> TopicLexicon:
    cfg.validate(need_lexicon=True)
    try:
        text = Path(cfg.lexicon).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read lexicon {cfg.lexicon}: {exc}") from exc
    return load_lexicon(text, normalizer)


@dataclass
class UnitResult:
    """Everything computed for one (topic, year) unit."""

    topic: Topic
    year: int
    status: str  # "ok" or "degenerate"
    reason: str = ""
    table: ContingencyTable | None = None
    embedding: CaEmbedding | None = None
    assignment: ClusterAssignment | None = None
    mad: float | None = None
    centroids: dict[str, float | None] = field(default_factory=dict)

    @property
    def key(self) -> str:
        return f"{self.topic.value}/{self.year}"


@dataclass
class _UnitWork:
    topic: Topic
    year: int
    bucket: list[Headline]
    outlet_names: tuple[str, ...]
    inclusion_threshold: int
    counting: str
    cluster_threshold: float | str
    mad_scope: str
    centroid_outlets: tuple[str, ...]


def _compute_unit(work: _UnitWork) -> UnitResult:
    try:
        table = build_table(
            work.bucket, work.outlet_names, work.topic, work.year,
            inclusion_threshold=work.inclusion_threshold, counting=work.counting,
        )
        emb = ca_embed(table)
    except DegenerateUnitError as exc:
        return UnitResult(work.topic, work.year, "degenerate", reason=exc.reason)
    assignment = find_clusters(emb, work.cluster_threshold)
    mad = cluster_mad(emb, assignment, scope=work.mad_scope)
    centroids: dict[str, float | None] = {}
    for outlet in work.centroid_outlets:
        try:
            centroids[outlet] = centroid_distance(emb, outlet, assignment)
        except MetricUndefinedError:
            centroids[outlet] = None
    return UnitResult(
        work.topic, work.year, "ok",
        table=table, embedding=emb, assignment=assignment,
        mad=mad, centroids=centroids,
    )


def compute_units(
    buckets: Mapping[Topic, Sequence[Headline]],
    cfg: RunConfig,
    outlet_names: tuple[str, ...],
) -> list[UnitResult]:
    """Compute all configured units, optionally in a process pool.

    The work list and the returned order are fixed by configuration, so the
    parallelism degree cannot change any downstream output.
    """
    centroid_outlets = (
        outlet_names if cfg.centroid_outlets == "all" else tuple(cfg.centroid_outlets)
    )
    work: list[_UnitWork] = []
    for topic in cfg.topics:
        by_year: dict[int, list[Headline]] = {}
        for h in buckets.get(topic, []):
            by_year.setdefault(h.year, []).append(h)
        for year in cfg.year_list():
            work.append(_UnitWork(
                topic, year, by_year.get(year, []), outlet_names,
                cfg.inclusion_threshold, cfg.counting,
                cfg.cluster_threshold, cfg.mad_scope, centroid_outlets,
            ))
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            return list(pool.map(_compute_unit, work))
    return [_compute_unit(w) for w in work]


@dataclass
class RunSummary:
    out_dir: Path
    n_ok: int
    n_degenerate: int
    n_files: int
    manifest_path: Path


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def analyze(cfg: RunConfig) -> RunSummary:
    """Run the full pipeline and write the output tree.

    Layout: ``<topic>/<year>/{table.csv, embedding.csv, scree.csv,
    scatter.svg}`` per viable unit, per-topic top-k tables and metric
    series, and a ``run_manifest.json`` with configuration, unit statuses,
    and content hashes.  Topics with no viable unit contribute nothing but
    their manifest entries.
    """
    cfg.validate(need_corpus=True, need_lexicon=True)
    inputs = load_inputs(cfg)
    lexicon = load_lexicon_file(cfg, inputs.normalizer)
    buckets = select_relevant(inputs.headlines, lexicon, assignment=cfg.assignment)
    stats = selection_stats(inputs.headlines, lexicon, assignment=cfg.assignment)
    results = compute_units(buckets, cfg, inputs.outlet_names)
    by_unit = {(r.topic, r.year): r for r in results}
    leanings = {o.name: o.leaning for o in inputs.outlets}

    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit_text(rel: Path, text: str) -> None:
        _write_text(out / rel, text)
        written.append(rel)

    def emit_bytes(rel: Path, blob: bytes) -> None:
        (out / rel).parent.mkdir(parents=True, exist_ok=True)
        (out / rel).write_bytes(blob)
        written.append(rel)

    def render_csv(write) -> str:
        buf = io.StringIO()
        write(buf)
        return buf.getvalue()

    centroid_outlets = (
        inputs.outlet_names if cfg.centroid_outlets == "all"
        else tuple(cfg.centroid_outlets)
    )
    years = cfg.year_list()
    unit_entries: dict[str, Any] = {}
    for topic in cfg.topics:
        per_year_emb: dict[int, CaEmbedding | None] = {}
        topic_dir = Path(topic.value)
        bucket = buckets.get(topic, [])
        by_year: dict[int, list[Headline]] = {}
        for h in bucket:
            by_year.setdefault(h.year, []).append(h)
        for year in years:
            res = by_unit[(topic, year)]
            entry: dict[str, Any] = {"status": res.status}
            if res.status != "ok":
                entry["reason"] = res.reason
                per_year_emb[year] = None
                unit_entries[res.key] = entry
                continue
            assert res.table is not None and res.embedding is not None
            per_year_emb[year] = res.embedding
            unit_dir = topic_dir / str(year)
            emit_text(unit_dir / "table.csv", render_csv(lambda fh: write_table_csv(res.table, fh)))
            emit_text(
                unit_dir / "embedding.csv",
                render_csv(lambda fh: write_embedding_csv(res.embedding, leanings, fh)),
            )
            emit_text(
                unit_dir / "scree.csv",
                render_csv(lambda fh: write_scree_csv(res.embedding, fh)),
            )
            emit_bytes(
                unit_dir / "scatter.svg",
                render_scatter(
                    res.embedding, inputs.outlets,
                    width=cfg.figure_width, height=cfg.figure_height,
                ),
            )
            assert res.assignment is not None
            entry.update({
                "outlets": list(res.table.outlets),
                "rows": len(res.table.ngrams),
                "total": res.table.total,
                "total_inertia": res.embedding.total_inertia,
                "explained_2d": res.embedding.explained_2d,
                "clusters": [list(c) for c in res.assignment.clusters],
                "major": res.assignment.major,
                "mad": res.mad,
                "centroids": res.centroids,
            })
            unit_entries[res.key] = entry

        ok_years = [y for y in years if per_year_emb.get(y) is not None]
        if not ok_years:
            continue
        for year in years:
            year_bucket = by_year.get(year, [])
            if not year_bucket:
                continue
            scoped = [o for o in inputs.outlet_names if any(h.outlet == o for h in year_bucket)]
            tables = [top_k(year_bucket, topic, year, k=cfg.top_k, counting=cfg.counting)]
            labels = ["all"]
            for o in scoped:
                tables.append(
                    top_k(year_bucket, topic, year, outlet=o, k=cfg.top_k, counting=cfg.counting)
                )
                labels.append(o)
            emit_text(topic_dir / f"topk_{year}.md", render_markdown(tables, labels))

        mad_series = DiscrepancySeries(
            topic, SeriesKind.CLUSTER_MAD, None,
            {y: (by_unit[(topic, y)].mad if per_year_emb.get(y) is not None else None)
             for y in years},
        )
        emit_text(
            topic_dir / "series_mad.csv",
            render_csv(lambda fh: write_series_csv(mad_series, fh)),
        )
        if mad_series.defined_years():
            emit_bytes(
                topic_dir / "series_mad.svg",
                render_series(
                    [mad_series], width=cfg.figure_width, height=cfg.figure_height,
                    title=f"{topic.value}: cluster dispersion by year",
                ),
            )
        for outlet in centroid_outlets:
            c_series = DiscrepancySeries(
                topic, SeriesKind.CENTROID_DISTANCE, outlet,
                {y: (by_unit[(topic, y)].centroids.get(outlet)
                     if per_year_emb.get(y) is not None else None)
                 for y in years},
            )
            slug = outlet.replace(" ", "_")
            emit_text(
                topic_dir / f"series_centroid_{slug}.csv",
                render_csv(lambda fh: write_series_csv(c_series, fh)),
            )
            if c_series.defined_years():
                emit_bytes(
                    topic_dir / f"series_centroid_{slug}.svg",
                    render_series(
                        [c_series], width=cfg.figure_width, height=cfg.figure_height,
                        title=f"{topic.value}: {outlet} distance to major-cluster centroid",
                    ),
                )

    manifest = {
        "tool": {"name": "themegap", "version": __version__},
        "config": cfg.echo(),
        "corpus_stats": {
            "rows": inputs.n_rows,
            "malformed": inputs.n_malformed,
            "out_of_range": inputs.n_filtered,
            "dropped_empty": inputs.n_dropped_empty,
            "headlines": len(inputs.headlines),
        },
        "selection": {
            "headlines": stats.n_headlines,
            "selected": stats.n_selected,
            "multi_topic": stats.n_multi_topic,
            "per_topic": {t.value: stats.per_topic[t] for t in Topic},
        },
        "units": unit_entries,
        "files": {p.as_posix(): _sha256(out / p) for p in written},
    }
    manifest_path = out / MANIFEST_NAME
    _write_text(manifest_path, json.dumps(manifest, sort_keys=True, indent=2) + "\n")

    n_ok = sum(1 for r in results if r.status == "ok")
    summary = RunSummary(out, n_ok, len(results) - n_ok, len(written) + 1, manifest_path)
    logger.info(
        "analyze: %d unit(s) ok, %d degenerate, %d file(s) under %s",
        summary.n_ok, summary.n_degenerate, summary.n_files, out,
    )
    return summary


@dataclass
class MineSummary:
    report: MiningReport
    stats: SelectionStats | None
    report_path: Path
    skeleton_path: Path


def mine(cfg: RunConfig) -> MineSummary:
    """Mine candidate bigrams and write the report plus a lexicon skeleton."""
    inputs = load_inputs(cfg)
    report = mine_frequent_bigrams(inputs.headlines, cfg.mining_threshold)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report_path = out / "mining_report.csv"
    skeleton_path = out / "lexicon_skeleton.tsv"
    buf = io.StringIO()
    write_mining_csv(report, buf)
    _write_text(report_path, buf.getvalue())
    buf = io.StringIO()
    write_lexicon_skeleton(report, buf)
    _write_text(skeleton_path, buf.getvalue())
    return MineSummary(report, None, report_path, skeleton_path)
