"""Headline ingestion and text normalization.

Raw records (outlet, date, title) arrive as JSON Lines or CSV.  Titles are
lowercased, tokenized, stripped of stopwords, and lemmatized into token
sequences tagged with outlet and calendar year.  Malformed rows are skipped
and counted; ingestion fails only when the malformed fraction exceeds a
configured limit.
"""

from __future__ import annotations

import csv
import datetime
import io
import json
import logging
import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

from .errors import ConfigError, DataError

logger = logging.getLogger(__name__)

DEFAULT_DATE_RANGE = (datetime.date(2014, 1, 1), datetime.date(2022, 9, 30))
DEFAULT_MAX_MALFORMED = 0.01

# Token characters: letters, digits, apostrophes.  \w minus underscore keeps
# the pattern Unicode-aware without admitting punctuation.
_TOKEN_RE = re.compile(r"(?:[^\W_]|')+")

# Suffix rules below never leave a stem shorter than this.
_MIN_STEM = 3
# Doubled finals undone after -ing/-ed stripping; ll/ss/ff/zz stay (tell, pass).
_UNDOUBLE = frozenset({"bb", "dd", "gg", "mm", "nn", "pp", "rr", "tt"})
# -es strips only after sibilant-ish stems and -o (boxes, churches, heroes).
_ES_STEMS = ("ss", "x", "z", "ch", "sh", "o")


class Leaning(Enum):
    """Declared ideological position of an outlet."""

    LEFT = "left"
    CENTRAL = "central"
    RIGHT = "right"


class CorpusFormat(Enum):
    JSONL = "jsonl"
    CSV = "csv"


@dataclass(frozen=True)
class RawRecord:
    """One headline as ingested, before any text processing."""

    outlet: str
    date: datetime.date
    title: str


@dataclass(frozen=True)
class OutletInfo:
    name: str
    leaning: Leaning


@dataclass(frozen=True)
class Headline:
    """A normalized headline: lowercase lemmas with stopwords removed."""

    outlet: str
    year: int
    tokens: tuple[str, ...]


def tokenize(title: str) -> tuple[str, ...]:
    """Lowercase *title* and split it into tokens.

    Any character that is not a letter, digit, or apostrophe separates
    tokens.  Apostrophes are stripped from token edges (quoting) but kept
    inside words (contractions).  Empty fragments are dropped.

    >>> tokenize("U.S.-China trade")
    ('u', 's', 'china', 'trade')
    """
    out = []
    for frag in _TOKEN_RE.findall(title.lower()):
        tok = frag.strip("'")
        if tok:
            out.append(tok)
    return tuple(out)


def remove_stopwords(tokens: Sequence[str], stoplist: frozenset[str]) -> tuple[str, ...]:
    """Drop stoplist members, preserving the order of the survivors."""
    return tuple(t for t in tokens if t not in stoplist)


class Lemmatizer:
    """Deterministic suffix lemmatizer with an exception dictionary.

    An exception-dictionary hit wins outright.  Otherwise the first
    applicable suffix rule rewrites the token; a rule whose result would be
    shorter than three characters is not applicable, and a token no rule
    matches passes through unchanged.  Rules, in order:

    1. ``-ies`` -> ``-y`` (policies -> policy)
    2. ``-es`` stripped after stems ending in ss/x/z/ch/sh/o (boxes -> box)
    3. ``-s`` stripped unless the token ends in ss/us/is (rules -> rule)
    4. ``-ing``/``-ed`` stripped, then a doubled final consonant is undone
       (planned -> plan) except for ll/ss/ff/zz and stems that would fall
       below the length floor (added -> add)

    The dictionary also hosts identity entries that shield words the rules
    would mangle (news, series).
    """

    def __init__(self, exceptions: Mapping[str, str] | None = None):
        self.exceptions = dict(exceptions or {})

    def lemma(self, token: str) -> str:
        hit = self.exceptions.get(token)
        if hit is not None:
            return hit
        if token.endswith("ies"):
            stem = token[:-3] + "y"
            if len(stem) >= _MIN_STEM:
                return stem
        if token.endswith("es") and token[:-2].endswith(_ES_STEMS):
            stem = token[:-2]
            if len(stem) >= _MIN_STEM:
                return stem
        if token.endswith("s") and not token.endswith(("ss", "us", "is")):
            stem = token[:-1]
            if len(stem) >= _MIN_STEM:
                return stem
        if token.endswith("ing"):
            stem = token[:-3]
            if len(stem) >= _MIN_STEM:
                return self._undouble(stem)
        if token.endswith("ed") and not token.endswith("eed"):
            stem = token[:-2]
            if len(stem) >= _MIN_STEM:
                return self._undouble(stem)
        return token

    @staticmethod
    def _undouble(stem: str) -> str:
        if len(stem) > _MIN_STEM and stem[-1] == stem[-2] and stem[-2:] in _UNDOUBLE:
            return stem[:-1]
        return stem

    def apply(self, tokens: Sequence[str]) -> tuple[str, ...]:
        """Lemmatize each token; output length equals input length."""
        return tuple(self.lemma(t) for t in tokens)


@dataclass(frozen=True)
class TextNormalizer:
    """The full title pipeline: tokenize, remove stopwords, lemmatize."""

    stoplist: frozenset[str]
    lemmatizer: Lemmatizer

    def normalize(self, text: str) -> tuple[str, ...]:
        return self.lemmatizer.apply(remove_stopwords(tokenize(text), self.stoplist))


def _read_data_text(name: str) -> str:
    return resources.files(__package__).joinpath("data", name).read_text(encoding="utf-8")


def parse_stoplist(text: str) -> frozenset[str]:
    """Parse a stoplist: one token per line, ``#`` comments and blanks ignored."""
    out = set()
    for line in text.splitlines():
        tok = line.strip()
        if tok and not tok.startswith("#"):
            out.add(tok.lower())
    return frozenset(out)


def parse_lemma_exceptions(text: str) -> dict[str, str]:
    """Parse an exception dictionary: ``surface<TAB>lemma`` per line."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise ConfigError(f"lemma exceptions line {lineno}: expected surface<TAB>lemma")
        out[parts[0].strip().lower()] = parts[1].strip().lower()
    return out


def default_stoplist() -> frozenset[str]:
    return parse_stoplist(_read_data_text("stopwords.txt"))


def default_lemma_exceptions() -> dict[str, str]:
    return parse_lemma_exceptions(_read_data_text("lemma_exceptions.tsv"))


def default_normalizer() -> TextNormalizer:
    return TextNormalizer(default_stoplist(), Lemmatizer(default_lemma_exceptions()))


def load_outlets(path: str | Path) -> list[OutletInfo]:
    """Load outlet configuration from JSON or TOML.

    Expected shape: a top-level ``outlets`` array of ``{name, leaning}``
    objects, leaning one of left/central/right.  Duplicate names are a
    configuration error.
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read outlet config {path}: {exc}") from exc
    if path.suffix.lower() == ".toml":
        try:
            import tomllib  # type: ignore[import-not-found]
        except ModuleNotFoundError:
            import tomli as tomllib
        try:
            doc = tomllib.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError(f"bad outlet config {path}: {exc}") from exc
    else:
        try:
            doc = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ConfigError(f"bad outlet config {path}: {exc}") from exc
    entries = doc.get("outlets") if isinstance(doc, dict) else None
    if not isinstance(entries, list) or not entries:
        raise ConfigError(f"{path}: expected a non-empty 'outlets' array")
    outlets: list[OutletInfo] = []
    seen: set[str] = set()
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or not isinstance(entry.get("name"), str):
            raise ConfigError(f"{path}: outlets[{i}] must be an object with a 'name' string")
        name = entry["name"].strip()
        if not name:
            raise ConfigError(f"{path}: outlets[{i}] has an empty name")
        if name in seen:
            raise ConfigError(f"{path}: duplicate outlet name {name!r}")
        seen.add(name)
        try:
            leaning = Leaning(entry.get("leaning"))
        except ValueError:
            raise ConfigError(
                f"{path}: outlets[{i}] leaning must be one of "
                + "/".join(l.value for l in Leaning)
            ) from None
        outlets.append(OutletInfo(name, leaning))
    return outlets


@dataclass
class IngestResult:
    """Outcome of one ingestion pass."""

    records: list[RawRecord]
    n_rows: int
    n_malformed: int
    n_filtered: int  # parseable rows whose date falls outside the configured range


def _parse_record_fields(outlet: object, date_str: object, title: object) -> RawRecord:
    if not isinstance(outlet, str) or not outlet.strip():
        raise ValueError("missing or empty outlet")
    if not isinstance(title, str) or not title.strip():
        raise ValueError("missing or empty title")
    if not isinstance(date_str, str):
        raise ValueError("missing date")
    try:
        date = datetime.date.fromisoformat(date_str)
    except ValueError:
        raise ValueError(f"bad date {date_str!r} (expected YYYY-MM-DD)") from None
    return RawRecord(outlet.strip(), date, title.strip())


def ingest(
    stream: IO[bytes] | IO[str],
    fmt: CorpusFormat,
    *,
    date_range: tuple[datetime.date, datetime.date] = DEFAULT_DATE_RANGE,
    max_malformed_fraction: float = DEFAULT_MAX_MALFORMED,
) -> IngestResult:
    """Read raw records from *stream* in the given format.

    Malformed rows (unparseable, missing fields, bad dates) are skipped with
    a warning carrying the line number.  Rows that parse but fall outside
    *date_range* (inclusive) are filtered and counted separately.  Raises
    DataError if the stream is not UTF-8 or the malformed fraction of data
    rows exceeds *max_malformed_fraction*.
    """
    if isinstance(stream, io.TextIOBase):
        text = stream
    else:
        text = io.TextIOWrapper(stream, encoding="utf-8", newline="")
    lo, hi = date_range
    if lo > hi:
        raise ConfigError(f"empty date range {lo}..{hi}")

    records: list[RawRecord] = []
    n_rows = 0
    n_malformed = 0
    n_filtered = 0

    def keep(rec: RawRecord) -> None:
        nonlocal n_filtered
        if lo <= rec.date <= hi:
            records.append(rec)
        else:
            n_filtered += 1

    try:
        if fmt is CorpusFormat.JSONL:
            for lineno, line in enumerate(text, 1):
                if not line.strip():
                    continue
                n_rows += 1
                try:
                    obj = json.loads(line)
                    if not isinstance(obj, dict):
                        raise ValueError("row is not an object")
                    rec = _parse_record_fields(
                        obj.get("outlet"), obj.get("date"), obj.get("title")
                    )
                except ValueError as exc:
                    n_malformed += 1
                    logger.warning("line %d skipped: %s", lineno, exc)
                    continue
                keep(rec)
        elif fmt is CorpusFormat.CSV:
            reader = csv.DictReader(text)
            if reader.fieldnames is None:
                raise DataError("CSV corpus is empty (no header row)")
            missing = {"outlet", "date", "title"} - set(reader.fieldnames)
            if missing:
                raise DataError(
                    "CSV corpus header lacks required columns: " + ", ".join(sorted(missing))
                )
            for row in reader:
                n_rows += 1
                try:
                    rec = _parse_record_fields(
                        row.get("outlet"), row.get("date"), row.get("title")
                    )
                except ValueError as exc:
                    n_malformed += 1
                    logger.warning("line %d skipped: %s", reader.line_num, exc)
                    continue
                keep(rec)
        else:  # pragma: no cover - enum is closed
            raise ValueError(f"unknown corpus format {fmt!r}")
    except UnicodeDecodeError as exc:
        raise DataError(f"corpus is not valid UTF-8: {exc}") from exc

    if n_rows and n_malformed / n_rows > max_malformed_fraction:
        raise DataError(
            f"{n_malformed} of {n_rows} rows malformed, above the "
            f"{max_malformed_fraction:.1%} limit"
        )
    logger.info(
        "ingested %d records (%d malformed, %d outside %s..%s)",
        len(records), n_malformed, n_filtered, lo, hi,
    )
    return IngestResult(records, n_rows, n_malformed, n_filtered)


def detect_format(path: str | Path) -> CorpusFormat:
    """Infer the corpus format from a file extension; .csv means CSV, else JSONL."""
    return CorpusFormat.CSV if Path(path).suffix.lower() == ".csv" else CorpusFormat.JSONL


@dataclass
class HeadlineBuild:
    headlines: list[Headline]
    n_dropped_empty: int


def build_headlines(
    records: Iterable[RawRecord],
    outlets: Sequence[OutletInfo],
    normalizer: TextNormalizer,
) -> HeadlineBuild:
    """Normalize *records* into Headlines grouped under known outlets.

    Every record outlet must appear in *outlets*; unknown names raise
    ConfigError listing the offenders.  Records whose token sequence becomes
    empty after normalization are dropped and counted.
    """
    known = {o.name for o in outlets}
    records = list(records)
    unknown = sorted({r.outlet for r in records} - known)
    if unknown:
        raise ConfigError("corpus mentions outlets missing from config: " + ", ".join(unknown))
    headlines: list[Headline] = []
    n_dropped = 0
    for rec in records:
        tokens = normalizer.normalize(rec.title)
        if not tokens:
            n_dropped += 1
            continue
        headlines.append(Headline(rec.outlet, rec.date.year, tokens))
    if n_dropped:
        logger.info("dropped %d records with no tokens after normalization", n_dropped)
    return HeadlineBuild(headlines, n_dropped)
