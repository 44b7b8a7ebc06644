"""Top-k n-gram tables and their markdown rendering."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .contingency import count_ngrams
from .corpus import Headline
from .lexicon import NGram, Topic

DEFAULT_TOP_K = 10


@dataclass(frozen=True)
class TopKTable:
    """The k most frequent n-grams of one bucket, optionally outlet-scoped."""

    topic: Topic
    year: int
    outlet: str | None
    rows: tuple[tuple[NGram, int], ...]


def top_k(
    bucket: Sequence[Headline],
    topic: Topic,
    year: int,
    *,
    outlet: str | None = None,
    k: int = DEFAULT_TOP_K,
    counting: str = "occurrences",
) -> TopKTable:
    """Rank bigrams and trigrams of *bucket* by frequency, keeping the top *k*.

    Ties are broken lexicographically on the space-joined n-gram.  With
    *outlet* set, only that outlet's headlines count.  Fewer than *k*
    distinct n-grams simply yields a shorter table.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    scoped = bucket if outlet is None else [h for h in bucket if h.outlet == outlet]
    counts = count_ngrams(scoped, counting=counting)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], " ".join(kv[0])))
    return TopKTable(topic, year, outlet, tuple(ranked[:k]))


@dataclass(frozen=True)
class Annotation:
    """Display attributes for one n-gram in rendered tables."""

    category: str
    color: str


def parse_annotations(text: str) -> dict[NGram, Annotation]:
    """Parse ``ngram<TAB>category<TAB>color`` lines; ``#`` comments ignored."""
    out: dict[NGram, Annotation] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = [p.strip() for p in stripped.split("\t")]
        if len(parts) != 3 or not all(parts):
            raise ValueError(f"annotation line {lineno}: expected ngram<TAB>category<TAB>color")
        out[tuple(parts[0].split())] = Annotation(parts[1], parts[2])
    return out


def render_markdown(
    tables: Sequence[TopKTable],
    labels: Sequence[str] | None = None,
    annotations: Mapping[NGram, Annotation] | None = None,
) -> str:
    """Render side-by-side top-k tables as one markdown pipe table.

    Each table becomes a column headed by its label (outlet name, or year
    for unscoped tables); row r holds each column's rank-r n-gram.  Columns
    shorter than the deepest one are padded with empty cells.  Annotated
    n-grams are wrapped in a colored span.  An empty table list renders as
    an empty document.
    """
    if not tables:
        return ""
    if labels is None:
        labels = [t.outlet if t.outlet else str(t.year) for t in tables]
    if len(labels) != len(tables):
        raise ValueError("labels and tables differ in length")

    def cell(gram: NGram) -> str:
        text = " ".join(gram)
        if annotations and gram in annotations:
            ann = annotations[gram]
            return f'<span style="color:{ann.color}">{text}</span>'
        return text

    depth = max(len(t.rows) for t in tables)
    lines = [
        "| rank | " + " | ".join(labels) + " |",
        "| --- | " + " | ".join("---" for _ in labels) + " |",
    ]
    for r in range(depth):
        row = [
            cell(t.rows[r][0]) if r < len(t.rows) else ""
            for t in tables
        ]
        lines.append(f"| {r + 1} | " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"
