"""Deterministic synthetic corpora with planted n-gram structure.

Demo fixtures and self-tests need corpora whose statistics are known in
advance.  Topic phrase vocabularies here use tokens that are fixed points
of the default normalization pipeline and appear in exactly one phrase
each, so planted phrases survive preprocessing verbatim and no accidental
token window can collide with a lexicon entry.  Titles still get case,
punctuation, and stopword noise so the pipeline has real work to do.
"""

from __future__ import annotations

import datetime
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .corpus import Leaning, OutletInfo, RawRecord
from .lexicon import NGram, Topic

DEFAULT_OUTLETS = (
    OutletInfo("argus", Leaning.LEFT),
    OutletInfo("beacon", Leaning.LEFT),
    OutletInfo("clarion", Leaning.LEFT),
    OutletInfo("dispatch", Leaning.LEFT),
    OutletInfo("examiner", Leaning.CENTRAL),
    OutletInfo("forum", Leaning.CENTRAL),
    OutletInfo("gazette", Leaning.RIGHT),
    OutletInfo("herald", Leaning.RIGHT),
    OutletInfo("journal", Leaning.RIGHT),
)

TOPIC_BIGRAMS: dict[Topic, tuple[NGram, ...]] = {
    Topic.FOREIGN_AFFAIRS: (
        ("border", "summit"), ("trade", "pact"), ("embassy", "envoy"),
        ("nato", "treaty"), ("kremlin", "sanction"), ("refugee", "convoy"),
        ("missile", "drone"), ("ceasefire", "accord"),
    ),
    Topic.DOMESTIC_POLITICS: (
        ("senate", "caucus"), ("governor", "veto"), ("ballot", "recount"),
        ("congress", "gridlock"), ("mayor", "incumbent"), ("voter", "turnout"),
        ("capitol", "lobby"), ("statehouse", "quorum"),
    ),
    Topic.ECONOMIC_ISSUE: (
        ("inflation", "surge"), ("jobless", "claim"), ("tariff", "levy"),
        ("market", "rally"), ("wage", "growth"), ("pension", "fund"),
        ("mortgage", "rate"), ("bond", "yield"),
    ),
    Topic.SOCIAL_ISSUE: (
        ("campus", "protest"), ("gun", "curb"), ("opioid", "epidemic"),
        ("tenant", "eviction"), ("vaccine", "mandate"), ("police", "reform"),
        ("church", "charity"), ("welfare", "stipend"),
    ),
}

TOPIC_TRIGRAMS: dict[Topic, tuple[NGram, ...]] = {
    Topic.FOREIGN_AFFAIRS: (("foreign", "minister", "visit"), ("nuclear", "deal", "framework")),
    Topic.DOMESTIC_POLITICS: (("midterm", "primary", "runoff"), ("federal", "budget", "shutdown")),
    Topic.ECONOMIC_ISSUE: (("crude", "barrel", "glut"), ("retail", "sale", "slump")),
    Topic.SOCIAL_ISSUE: (("teacher", "strike", "picket"), ("hospital", "nurse", "walkout")),
}

# Alternative vocabulary for the divergence fixture: same topic labels,
# token set disjoint from everything above.
DIVERGENT_BIGRAMS: dict[Topic, tuple[NGram, ...]] = {
    Topic.FOREIGN_AFFAIRS: (
        ("quantum", "rift"), ("zeppelin", "motif"), ("obsidian", "glyph"),
        ("meteor", "shard"), ("falcon", "aerie"), ("lantern", "flare"),
        ("crimson", "pennant"), ("velvet", "scepter"),
    ),
}

# Filler surfaces and glue; filler lemmas stay disjoint from phrase tokens.
FILLERS = (
    "report", "reports", "plan", "plans", "official", "officials",
    "leader", "leaders", "city", "cities", "nation", "week", "month",
    "record", "push", "move", "call", "calls", "face", "faces",
    "debate", "measure", "measures", "effort", "efforts",
)
GLUE = ("the", "a", "of", "in", "on", "over", "after", "as", "to", "and")


@dataclass
class SynthSpec:
    """Knobs for corpus generation; defaults suit a 10k-headline fixture."""

    seed: int = 0
    n_headlines: int = 10_000
    outlets: tuple[OutletInfo, ...] = DEFAULT_OUTLETS
    years: tuple[int, ...] = tuple(range(2014, 2023))
    topics: tuple[Topic, ...] = tuple(Topic)
    trigram_fraction: float = 0.35
    multi_topic_fraction: float = 0.08
    second_bigram_fraction: float = 0.25


def _noisy_title(rng: random.Random, units: list[tuple[str, ...]]) -> str:
    """Assemble phrase/filler units into a title with surface noise.

    Units are shuffled whole, so tokens inside a phrase stay adjacent; glue
    stopwords, commas, casing, and terminal punctuation all wash out in
    normalization.
    """
    rng.shuffle(units)
    words: list[str] = []
    for i, unit in enumerate(units):
        if i and rng.random() < 0.5:
            words.append(rng.choice(GLUE))
        words.extend(unit)
        if i < len(units) - 1 and rng.random() < 0.15:
            words[-1] += ","
    styled = [w.capitalize() if rng.random() < 0.3 else w for w in words]
    if styled:
        styled[0] = styled[0].capitalize()
    return " ".join(styled) + rng.choice(("", "", "", "!", "?"))


def make_records(spec: SynthSpec) -> list[RawRecord]:
    """Generate raw records per *spec*; same spec, same records."""
    rng = random.Random(spec.seed)
    records: list[RawRecord] = []
    names = [o.name for o in spec.outlets]
    for _ in range(spec.n_headlines):
        outlet = rng.choice(names)
        year = rng.choice(spec.years)
        month = rng.randint(1, 9 if year == 2022 else 12)
        day = rng.randint(1, 28)
        topic = rng.choice(spec.topics)
        units: list[tuple[str, ...]] = [rng.choice(TOPIC_BIGRAMS[topic])]
        if rng.random() < spec.second_bigram_fraction:
            units.append(rng.choice(TOPIC_BIGRAMS[topic]))
        if rng.random() < spec.trigram_fraction:
            units.append(rng.choice(TOPIC_TRIGRAMS[topic]))
        if rng.random() < spec.multi_topic_fraction:
            other = rng.choice([t for t in spec.topics if t is not topic])
            units.append(rng.choice(TOPIC_BIGRAMS[other]))
        for _ in range(rng.randint(1, 3)):
            units.append((rng.choice(FILLERS),))
        records.append(
            RawRecord(outlet, datetime.date(year, month, day), _noisy_title(rng, units))
        )
    return records


def make_divergent_records(
    seed: int,
    *,
    divergent_outlet: str,
    outlets: Sequence[OutletInfo] = DEFAULT_OUTLETS,
    year: int = 2021,
    n_per_outlet: int = 200,
) -> list[RawRecord]:
    """One-year corpus where one outlet writes from a disjoint vocabulary.

    The other outlets draw phrases from the shared foreign-affairs pool
    with mild per-outlet preference jitter; *divergent_outlet* draws only
    from the divergent pool, whose bigrams carry the same topic label, so
    all headlines land in one (topic, year) unit.
    """
    names = [o.name for o in outlets]
    if divergent_outlet not in names:
        raise ValueError(f"{divergent_outlet!r} is not among the outlets")
    rng = random.Random(seed)
    shared = TOPIC_BIGRAMS[Topic.FOREIGN_AFFAIRS]
    apart = DIVERGENT_BIGRAMS[Topic.FOREIGN_AFFAIRS]
    records: list[RawRecord] = []
    for name in names:
        pool = apart if name == divergent_outlet else shared
        weights = [rng.uniform(0.6, 1.4) for _ in pool]
        for _ in range(n_per_outlet):
            units: list[tuple[str, ...]] = list(rng.choices(pool, weights=weights, k=2))
            for _ in range(rng.randint(1, 2)):
                units.append((rng.choice(FILLERS),))
            records.append(
                RawRecord(
                    name,
                    datetime.date(year, rng.randint(1, 12), rng.randint(1, 28)),
                    _noisy_title(rng, units),
                )
            )
    return records


def lexicon_text(include_divergent: bool = True) -> str:
    """The labeled lexicon matching the planted vocabularies, as TSV."""
    lines = ["# bigram<TAB>topic"]
    for topic, grams in TOPIC_BIGRAMS.items():
        for gram in grams:
            lines.append(f"{' '.join(gram)}\t{topic.value}")
    if include_divergent:
        for topic, grams in DIVERGENT_BIGRAMS.items():
            for gram in grams:
                lines.append(f"{' '.join(gram)}\t{topic.value}")
    return "\n".join(lines) + "\n"


def outlets_json(outlets: Sequence[OutletInfo] = DEFAULT_OUTLETS) -> str:
    return json.dumps(
        {"outlets": [{"name": o.name, "leaning": o.leaning.value} for o in outlets]},
        indent=2,
    ) + "\n"


def write_fixture(
    out_dir: str | Path,
    *,
    seed: int = 0,
    n_headlines: int = 10_000,
    mining_threshold: int = 25,
    inclusion_threshold: int = 3,
) -> Path:
    """Write a ready-to-run fixture: corpus, outlet config, lexicon, config.

    Thresholds default to values scaled for the 10k-headline corpus rather
    than the full-size defaults.  Returns the config path.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    spec = SynthSpec(seed=seed, n_headlines=n_headlines)
    with open(out / "corpus.jsonl", "w", encoding="utf-8", newline="") as fh:
        for rec in make_records(spec):
            fh.write(json.dumps(
                {"outlet": rec.outlet, "date": rec.date.isoformat(), "title": rec.title}
            ) + "\n")
    (out / "outlets.json").write_text(outlets_json(spec.outlets), encoding="utf-8")
    (out / "lexicon.tsv").write_text(lexicon_text(), encoding="utf-8")
    config = f"""[inputs]
corpus = "corpus.jsonl"
outlets = "outlets.json"
lexicon = "lexicon.tsv"

[analysis]
years = "{spec.years[0]}..{spec.years[-1]}"
mining_threshold = {mining_threshold}
inclusion_threshold = {inclusion_threshold}

[output]
dir = "out"
"""
    config_path = out / "config.toml"
    config_path.write_text(config, encoding="utf-8")
    return config_path
