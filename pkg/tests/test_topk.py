from __future__ import annotations

import pytest

from themegap.corpus import Headline
from themegap.lexicon import Topic
from themegap.topk import (
    DEFAULT_TOP_K,
    Annotation,
    parse_annotations,
    render_markdown,
    top_k,
)

T = Topic.DOMESTIC_POLITICS


def hl(outlet, *tokens):
    return Headline(outlet, 2020, tuple(tokens))


BUCKET = (
    [hl("a", "gas", "price")] * 3
    + [hl("b", "gas", "price")] * 2
    + [hl("b", "vote", "count")] * 4
    + [hl("c", "tax", "cut", "plan")] * 2
)


class TestTopK:
    def test_ranking(self):
        t = top_k(BUCKET, T, 2020, k=3)
        assert t.rows[0] == (("gas", "price"), 5)
        assert t.rows[1] == (("vote", "count"), 4)
        assert t.topic is T and t.year == 2020 and t.outlet is None

    def test_tie_broken_lexicographically(self):
        bucket = [hl("a", "b", "b")] * 2 + [hl("a", "a", "a")] * 2
        t = top_k(bucket, T, 2020, k=5)
        assert t.rows == ((("a", "a"), 2), (("b", "b"), 2))

    def test_trigrams_rank_too(self):
        t = top_k(BUCKET, T, 2020, k=10)
        grams = [g for g, _ in t.rows]
        assert ("tax", "cut", "plan") in grams
        assert ("tax", "cut") in grams

    def test_outlet_scoping(self):
        t = top_k(BUCKET, T, 2020, outlet="b", k=2)
        assert t.rows[0] == (("vote", "count"), 4)
        assert t.rows[1] == (("gas", "price"), 2)
        assert t.outlet == "b"

    def test_k_truncates(self):
        assert len(top_k(BUCKET, T, 2020, k=1).rows) == 1

    def test_short_bucket_short_table(self):
        t = top_k([hl("a", "x", "y")], T, 2020, k=10)
        assert t.rows == ((("x", "y"), 1),)

    def test_empty_bucket(self):
        assert top_k([], T, 2020).rows == ()

    def test_headline_counting(self):
        bucket = [hl("a", "x", "y", "x", "y")]
        occ = top_k(bucket, T, 2020, k=1)
        per = top_k(bucket, T, 2020, k=1, counting="headlines")
        assert occ.rows[0][1] == 2
        assert per.rows[0][1] == 1

    def test_bad_k(self):
        with pytest.raises(ValueError):
            top_k(BUCKET, T, 2020, k=0)

    def test_default_k(self):
        assert DEFAULT_TOP_K == 10


class TestAnnotations:
    def test_parse(self):
        text = "# comment\ngas price\tinflation\t#cc0000\n\nvote count\telection\tblue\n"
        anns = parse_annotations(text)
        assert anns[("gas", "price")] == Annotation("inflation", "#cc0000")
        assert anns[("vote", "count")] == Annotation("election", "blue")

    def test_parse_errors(self):
        with pytest.raises(ValueError, match="line 1"):
            parse_annotations("gas price\tinflation\n")
        with pytest.raises(ValueError, match="line 2"):
            parse_annotations("a b\tc\td\nx y\tz\n")
        with pytest.raises(ValueError, match="line 1"):
            parse_annotations("a b\t\tred\n")


class TestRenderMarkdown:
    def test_empty(self):
        assert render_markdown([]) == ""

    def test_single_table_default_label(self):
        t = top_k(BUCKET, T, 2020, k=2)
        md = render_markdown([t])
        lines = md.splitlines()
        assert lines[0] == "| rank | 2020 |"
        assert lines[1] == "| --- | --- |"
        assert lines[2] == "| 1 | gas price |"
        assert lines[3] == "| 2 | vote count |"
        assert md.endswith("\n")

    def test_outlet_label_and_padding(self):
        ta = top_k(BUCKET, T, 2020, outlet="a", k=5)
        tb = top_k(BUCKET, T, 2020, outlet="b", k=5)
        md = render_markdown([ta, tb])
        lines = md.splitlines()
        assert lines[0] == "| rank | a | b |"
        # Outlet a has one distinct bigram, b has two: the short column pads.
        assert lines[3] == "| 2 |  | gas price |"

    def test_explicit_labels(self):
        t = top_k(BUCKET, T, 2020, k=1)
        md = render_markdown([t], labels=["all"])
        assert md.splitlines()[0] == "| rank | all |"

    def test_label_length_mismatch(self):
        t = top_k(BUCKET, T, 2020, k=1)
        with pytest.raises(ValueError):
            render_markdown([t], labels=["x", "y"])

    def test_annotation_span(self):
        t = top_k(BUCKET, T, 2020, k=1)
        anns = {("gas", "price"): Annotation("inflation", "#cc0000")}
        md = render_markdown([t], annotations=anns)
        assert '<span style="color:#cc0000">gas price</span>' in md
