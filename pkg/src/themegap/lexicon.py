"""Frequent-bigram mining, the topic lexicon, and relevant-title selection.

Mining surfaces bigrams frequent enough in at least one year to be worth
labeling.  A human labels them with topics in a tab-separated lexicon; the
lexicon then routes headlines into per-topic buckets.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .corpus import Headline, TextNormalizer
from .errors import DataError

logger = logging.getLogger(__name__)

NGram = tuple[str, ...]

DEFAULT_MINING_THRESHOLD = 100


class Topic(Enum):
    """The four thematic categories used throughout the pipeline."""

    FOREIGN_AFFAIRS = "foreign"
    DOMESTIC_POLITICS = "domestic"
    ECONOMIC_ISSUE = "economic"
    SOCIAL_ISSUE = "social"


def extract_ngrams(tokens: Sequence[str], arity: int) -> list[NGram]:
    """All contiguous *arity*-grams of *tokens* in order, with multiplicity.

    Only bigrams and trigrams are meaningful here; other arities are refused.
    A sequence shorter than *arity* yields no n-grams.
    """
    if arity not in (2, 3):
        raise ValueError(f"arity must be 2 or 3, got {arity}")
    return [tuple(tokens[i : i + arity]) for i in range(len(tokens) - arity + 1)]


@dataclass
class MiningReport:
    """Candidate bigrams with per-year and total frequencies.

    ``per_year[gram][year]`` covers every year in ``years`` (zeros included)
    so downstream tabular output is rectangular.
    """

    years: tuple[int, ...]
    threshold: int
    per_year: dict[NGram, dict[int, int]]
    totals: dict[NGram, int]

    def __len__(self) -> int:
        return len(self.per_year)


def mine_frequent_bigrams(
    headlines: Iterable[Headline],
    threshold: int = DEFAULT_MINING_THRESHOLD,
) -> MiningReport:
    """Find bigrams whose count reaches *threshold* in at least one year.

    Counts are occurrences across all outlets, so a bigram appearing twice
    in one headline counts twice.  The threshold is inclusive: a single-year
    count equal to *threshold* qualifies.
    """
    if threshold < 1:
        raise ValueError(f"threshold must be >= 1, got {threshold}")
    counts: Counter[tuple[int, NGram]] = Counter()
    years: set[int] = set()
    for h in headlines:
        years.add(h.year)
        for gram in extract_ngrams(h.tokens, 2):
            counts[(h.year, gram)] += 1
    year_order = tuple(sorted(years))
    candidates: set[NGram] = {gram for (_, gram), c in counts.items() if c >= threshold}
    per_year: dict[NGram, dict[int, int]] = {}
    totals: dict[NGram, int] = {}
    for gram in sorted(candidates):
        by_year = {y: counts.get((y, gram), 0) for y in year_order}
        per_year[gram] = by_year
        totals[gram] = sum(by_year.values())
    logger.info(
        "mined %d candidate bigrams at threshold %d over years %s",
        len(per_year), threshold, list(year_order),
    )
    return MiningReport(year_order, threshold, per_year, totals)


@dataclass
class TopicLexicon:
    """Bigram-to-topic mapping loaded from a labeled file."""

    entries: dict[NGram, Topic]

    def __len__(self) -> int:
        return len(self.entries)


def load_lexicon(text: str, normalizer: TextNormalizer | None = None) -> TopicLexicon:
    """Parse a labeled lexicon: ``token token<TAB>topic`` per line.

    ``#`` comments and blank lines are ignored.  When *normalizer* is given,
    each bigram is passed through it so lexicon entries match the corpus
    token space regardless of how the file was written; an entry that does
    not survive as exactly two tokens is a fatal error.  Duplicate entries
    with the same topic are dropped with a warning; conflicting topics for
    one bigram are fatal, reporting both line numbers.
    """
    entries: dict[NGram, Topic] = {}
    first_line: dict[NGram, int] = {}
    topic_by_value = {t.value: t for t in Topic}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = line.rstrip("\n").split("\t")
        parts = [p.strip() for p in parts if p.strip()]
        if len(parts) != 2:
            raise DataError(f"lexicon line {lineno}: expected 'token token<TAB>topic'")
        gram_text, topic_text = parts
        if normalizer is not None:
            gram = normalizer.normalize(gram_text)
        else:
            gram = tuple(gram_text.split())
        if len(gram) != 2:
            raise DataError(
                f"lexicon line {lineno}: {gram_text!r} does not normalize to a bigram"
            )
        bad = [t for t in gram if not t or t != t.lower() or any(ch.isspace() for ch in t)]
        if bad:
            raise DataError(f"lexicon line {lineno}: bad token {bad[0]!r}")
        topic = topic_by_value.get(topic_text.lower())
        if topic is None:
            raise DataError(
                f"lexicon line {lineno}: unknown topic {topic_text!r} (expected "
                + "/".join(topic_by_value) + ")"
            )
        if gram in entries:
            if entries[gram] is topic:
                logger.warning(
                    "lexicon line %d: duplicate of line %d dropped", lineno, first_line[gram]
                )
            else:
                raise DataError(
                    f"lexicon line {lineno}: {' '.join(gram)!r} conflicts with line "
                    f"{first_line[gram]} ({entries[gram].value} vs {topic_text})"
                )
            continue
        entries[gram] = topic
        first_line[gram] = lineno
    return TopicLexicon(entries)


def matched_topics(tokens: Sequence[str], lexicon: TopicLexicon) -> list[Topic]:
    """Topics whose lexicon bigrams occur in *tokens*, ordered by first hit."""
    seen: list[Topic] = []
    for gram in extract_ngrams(tokens, 2):
        topic = lexicon.entries.get(gram)
        if topic is not None and topic not in seen:
            seen.append(topic)
    return seen


def select_relevant(
    headlines: Iterable[Headline],
    lexicon: TopicLexicon,
    *,
    assignment: str = "all",
) -> dict[Topic, list[Headline]]:
    """Route headlines into per-topic buckets by lexicon bigram matches.

    ``assignment="all"`` places a headline in every topic it matches;
    ``"first"`` uses only the topic of the first matching bigram.  Headlines
    matching no lexicon bigram land nowhere.  Every topic is present in the
    result, possibly with an empty bucket.
    """
    if assignment not in ("all", "first"):
        raise ValueError(f"assignment must be 'all' or 'first', got {assignment!r}")
    if not lexicon.entries:
        raise DataError("lexicon is empty; nothing can be selected")
    buckets: dict[Topic, list[Headline]] = {t: [] for t in Topic}
    for h in headlines:
        topics = matched_topics(h.tokens, lexicon)
        if assignment == "first":
            topics = topics[:1]
        for t in topics:
            buckets[t].append(h)
    return buckets


@dataclass
class SelectionStats:
    """How selection went: volume per topic and multi-topic overlap."""

    n_headlines: int
    n_selected: int
    n_multi_topic: int
    per_topic: dict[Topic, int]


def selection_stats(
    headlines: Iterable[Headline],
    lexicon: TopicLexicon,
    *,
    assignment: str = "all",
) -> SelectionStats:
    """Selection volumes under the given assignment mode.

    ``per_topic`` counts bucket sizes; ``n_multi_topic`` counts headlines
    matching more than one topic regardless of mode, since that overlap is
    what the mode choice hides or exposes.
    """
    n_headlines = 0
    n_selected = 0
    n_multi = 0
    per_topic = {t: 0 for t in Topic}
    for h in headlines:
        n_headlines += 1
        topics = matched_topics(h.tokens, lexicon)
        if topics:
            n_selected += 1
        if len(topics) > 1:
            n_multi += 1
        if assignment == "first":
            topics = topics[:1]
        for t in topics:
            per_topic[t] += 1
    return SelectionStats(n_headlines, n_selected, n_multi, per_topic)
