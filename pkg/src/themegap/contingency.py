"""Outlet-by-n-gram contingency tables for one (topic, year) unit.

Rows are the bigrams and trigrams that clear a per-outlet frequency
threshold, columns are outlets, cells are raw counts.  Tables too small to
carry a two-dimensional embedding are refused as degenerate rather than
silently analyzed.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .corpus import Headline
from .errors import DegenerateUnitError
from .lexicon import NGram, Topic, extract_ngrams

logger = logging.getLogger(__name__)

ARITIES = (2, 3)
DEFAULT_INCLUSION_THRESHOLD = 50
MIN_ROWS = 2
MIN_COLS = 3

COUNTING_MODES = ("occurrences", "headlines")


def count_ngrams(headlines: Iterable[Headline], *, counting: str = "occurrences") -> Counter[NGram]:
    """Count bigrams and trigrams across *headlines*.

    ``occurrences`` counts every window; ``headlines`` counts each distinct
    n-gram at most once per headline.
    """
    if counting not in COUNTING_MODES:
        raise ValueError(f"counting must be one of {COUNTING_MODES}, got {counting!r}")
    counts: Counter[NGram] = Counter()
    for h in headlines:
        grams: Iterable[NGram] = [
            g for arity in ARITIES for g in extract_ngrams(h.tokens, arity)
        ]
        if counting == "headlines":
            grams = set(grams)
        counts.update(grams)
    return counts


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """Counts of retained n-grams (rows) per outlet (columns) for one unit."""

    topic: Topic
    year: int
    outlets: tuple[str, ...]
    ngrams: tuple[NGram, ...]
    counts: np.ndarray  # shape (len(ngrams), len(outlets)), int64

    def __post_init__(self) -> None:
        if self.counts.shape != (len(self.ngrams), len(self.outlets)):
            raise ValueError("counts shape does not match row/column labels")
        self.counts.setflags(write=False)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def build_table(
    bucket: Sequence[Headline],
    outlets: Sequence[str],
    topic: Topic,
    year: int,
    *,
    inclusion_threshold: int = DEFAULT_INCLUSION_THRESHOLD,
    counting: str = "occurrences",
) -> ContingencyTable:
    """Build the contingency table for one (topic, year) bucket.

    An n-gram becomes a row when its count within at least one single outlet
    strictly exceeds *inclusion_threshold*; cells then hold counts for all
    outlets, including those below the threshold.  Outlets with an all-zero
    column are dropped with a warning.  Rows are ordered by descending total
    then lexicographically on the space-joined n-gram; columns follow the
    *outlets* order given.

    Raises DegenerateUnitError when fewer than 2 rows or 3 columns survive.
    """
    if inclusion_threshold < 0:
        raise ValueError(f"inclusion_threshold must be >= 0, got {inclusion_threshold}")
    outlets = tuple(outlets)
    if len(set(outlets)) != len(outlets):
        raise ValueError("duplicate outlet names")
    stray = sorted({h.outlet for h in bucket} - set(outlets))
    if stray:
        raise ValueError("bucket contains outlets not in the configured order: " + ", ".join(stray))
    wrong_year = [h for h in bucket if h.year != year]
    if wrong_year:
        raise ValueError(f"bucket for {year} contains a headline from {wrong_year[0].year}")

    per_outlet: dict[str, Counter[NGram]] = {}
    for name in outlets:
        per_outlet[name] = count_ngrams(
            [h for h in bucket if h.outlet == name], counting=counting
        )

    retained = {
        gram
        for c in per_outlet.values()
        for gram, count in c.items()
        if count > inclusion_threshold
    }
    if len(retained) < MIN_ROWS:
        raise DegenerateUnitError(
            topic, year,
            f"{len(retained)} n-gram(s) exceed the per-outlet threshold "
            f"{inclusion_threshold}; need at least {MIN_ROWS}",
        )

    totals = {g: sum(per_outlet[o].get(g, 0) for o in outlets) for g in retained}
    row_order = sorted(retained, key=lambda g: (-totals[g], " ".join(g)))

    kept_cols = [o for o in outlets if any(per_outlet[o].get(g, 0) for g in retained)]
    dropped = [o for o in outlets if o not in kept_cols]
    if dropped:
        logger.warning(
            "%s/%d: dropping outlets with no retained n-grams: %s",
            topic.value, year, ", ".join(dropped),
        )
    if len(kept_cols) < MIN_COLS:
        raise DegenerateUnitError(
            topic, year,
            f"{len(kept_cols)} outlet column(s) remain; need at least {MIN_COLS}",
        )

    counts = np.array(
        [[per_outlet[o].get(g, 0) for o in kept_cols] for g in row_order],
        dtype=np.int64,
    )
    return ContingencyTable(topic, year, tuple(kept_cols), tuple(row_order), counts)
