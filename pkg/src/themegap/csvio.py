"""Readers and writers for the delimited output formats.

All writers emit LF line endings and render floats with ``repr``, whose
shortest round-trip representation lets verification reload values exactly
as computed.
"""

from __future__ import annotations

import csv
from typing import IO, Mapping

import numpy as np

from .ca import NEGLIGIBLE_INERTIA, CaEmbedding
from .contingency import ContingencyTable
from .corpus import Leaning
from .errors import DataError
from .lexicon import MiningReport, NGram, Topic
from .metrics import DiscrepancySeries, SeriesKind

NA = "NA"

MINING_HEADER = ["bigram", "year", "count"]
EMBEDDING_HEADER = ["outlet", "dim1", "dim2", "leaning"]
SCREE_HEADER = ["dim", "singular_value", "inertia_fraction"]
SERIES_HEADER = ["topic", "kind", "outlet_or_blank", "year", "value_or_NA"]


def _writer(fh: IO[str]) -> "csv.writer":
    return csv.writer(fh, lineterminator="\n")


def _fmt(x: float) -> str:
    return repr(float(x))


def write_mining_csv(report: MiningReport, fh: IO[str]) -> None:
    """One row per (candidate bigram, year), bigrams sorted, years ascending."""
    w = _writer(fh)
    w.writerow(MINING_HEADER)
    for gram in sorted(report.per_year):
        for year in report.years:
            w.writerow([" ".join(gram), year, report.per_year[gram][year]])


def write_lexicon_skeleton(report: MiningReport, fh: IO[str]) -> None:
    """Unlabeled lexicon lines for mined candidates, busiest bigrams first.

    The topic column is left empty for hand labeling; the emitted comments
    make the file self-describing and are ignored by the lexicon loader.
    """
    fh.write("# bigram<TAB>topic\n")
    fh.write("# topics: " + " | ".join(t.value for t in Topic) + "\n")
    for gram in sorted(report.per_year, key=lambda g: (-report.totals[g], " ".join(g))):
        fh.write(" ".join(gram) + "\t\n")


def write_table_csv(table: ContingencyTable, fh: IO[str]) -> None:
    """Header ``ngram`` plus outlet columns; one row per retained n-gram."""
    w = _writer(fh)
    w.writerow(["ngram", *table.outlets])
    for i, gram in enumerate(table.ngrams):
        w.writerow([" ".join(gram), *(int(x) for x in table.counts[i])])


def read_table_csv(fh: IO[str], topic: Topic, year: int) -> ContingencyTable:
    rows = list(csv.reader(fh))
    if not rows or not rows[0] or rows[0][0] != "ngram" or len(rows[0]) < 2:
        raise DataError("table CSV must start with an 'ngram' header plus outlet columns")
    outlets = tuple(rows[0][1:])
    ngrams: list[NGram] = []
    counts: list[list[int]] = []
    for lineno, row in enumerate(rows[1:], 2):
        if len(row) != len(outlets) + 1:
            raise DataError(f"table CSV line {lineno}: expected {len(outlets) + 1} fields")
        ngrams.append(tuple(row[0].split()))
        try:
            counts.append([int(x) for x in row[1:]])
        except ValueError as exc:
            raise DataError(f"table CSV line {lineno}: {exc}") from None
    if not ngrams:
        raise DataError("table CSV has no data rows")
    return ContingencyTable(
        topic, year, outlets, tuple(ngrams), np.array(counts, dtype=np.int64)
    )


def write_embedding_csv(
    emb: CaEmbedding, leanings: Mapping[str, Leaning], fh: IO[str]
) -> None:
    """One row per outlet in embedding order, with its leaning for re-plotting."""
    w = _writer(fh)
    w.writerow(EMBEDDING_HEADER)
    for outlet, (x, y) in emb.outlet_points.items():
        w.writerow([outlet, _fmt(x), _fmt(y), leanings[outlet].value])


def write_scree_csv(emb: CaEmbedding, fh: IO[str]) -> None:
    """All singular values with their inertia fractions, dimension-major."""
    w = _writer(fh)
    w.writerow(SCREE_HEADER)
    total = emb.total_inertia
    for d, s in enumerate(emb.singular_values, 1):
        frac = (s * s / total) if total > NEGLIGIBLE_INERTIA else 0.0
        w.writerow([d, _fmt(s), _fmt(frac)])


def read_embedding_csv(
    fh: IO[str], topic: Topic, year: int, scree_fh: IO[str] | None = None
) -> tuple[CaEmbedding, dict[str, Leaning]]:
    """Reload an embedding (and its leanings) written by the writers above.

    The scree file restores singular values and the inertia split; without
    it both are reported as unknown (empty/zero), which is enough for
    distance work but not for axis annotations.
    """
    rows = list(csv.reader(fh))
    if not rows or rows[0] != EMBEDDING_HEADER:
        raise DataError(f"embedding CSV must start with header {','.join(EMBEDDING_HEADER)}")
    points: dict[str, tuple[float, float]] = {}
    leanings: dict[str, Leaning] = {}
    for lineno, row in enumerate(rows[1:], 2):
        if len(row) != 4:
            raise DataError(f"embedding CSV line {lineno}: expected 4 fields")
        name, xs, ys, leaning = row
        if name in points:
            raise DataError(f"embedding CSV line {lineno}: duplicate outlet {name!r}")
        try:
            points[name] = (float(xs), float(ys))
            leanings[name] = Leaning(leaning)
        except ValueError as exc:
            raise DataError(f"embedding CSV line {lineno}: {exc}") from None
    if not points:
        raise DataError("embedding CSV has no data rows")
    singular: tuple[float, ...] = ()
    total = 0.0
    if scree_fh is not None:
        singular = read_scree_csv(scree_fh)
        total = float(sum(s * s for s in singular))
    if total > NEGLIGIBLE_INERTIA:
        explained = min(sum(s * s for s in singular[:2]) / total, 1.0)
    else:
        explained = 1.0
    return (
        CaEmbedding(topic, year, points, singular, total, explained),
        leanings,
    )


def read_scree_csv(fh: IO[str]) -> tuple[float, ...]:
    rows = list(csv.reader(fh))
    if not rows or rows[0] != SCREE_HEADER:
        raise DataError(f"scree CSV must start with header {','.join(SCREE_HEADER)}")
    out = []
    for lineno, row in enumerate(rows[1:], 2):
        if len(row) != 3:
            raise DataError(f"scree CSV line {lineno}: expected 3 fields")
        try:
            out.append(float(row[1]))
        except ValueError as exc:
            raise DataError(f"scree CSV line {lineno}: {exc}") from None
    return tuple(out)


def write_series_csv(series: DiscrepancySeries, fh: IO[str]) -> None:
    """One row per year in the series, gaps written as NA."""
    w = _writer(fh)
    w.writerow(SERIES_HEADER)
    for year in sorted(series.values):
        val = series.values[year]
        w.writerow([
            series.topic.value,
            series.kind.value,
            series.outlet or "",
            year,
            NA if val is None else _fmt(val),
        ])


def read_series_csv(fh: IO[str]) -> list[DiscrepancySeries]:
    """Reload series rows, grouping by (topic, kind, outlet)."""
    rows = list(csv.reader(fh))
    if not rows or rows[0] != SERIES_HEADER:
        raise DataError(f"series CSV must start with header {','.join(SERIES_HEADER)}")
    grouped: dict[tuple[Topic, SeriesKind, str | None], dict[int, float | None]] = {}
    for lineno, row in enumerate(rows[1:], 2):
        if len(row) != 5:
            raise DataError(f"series CSV line {lineno}: expected 5 fields")
        topic_s, kind_s, outlet_s, year_s, val_s = row
        try:
            key = (Topic(topic_s), SeriesKind(kind_s), outlet_s or None)
            year = int(year_s)
            val = None if val_s == NA else float(val_s)
        except ValueError as exc:
            raise DataError(f"series CSV line {lineno}: {exc}") from None
        grouped.setdefault(key, {})[year] = val
    return [
        DiscrepancySeries(topic, kind, outlet, values)
        for (topic, kind, outlet), values in grouped.items()
    ]
