from __future__ import annotations

import io
import math

import numpy as np
import pytest

from themegap.ca import CaEmbedding, ca_embed
from themegap.contingency import ContingencyTable
from themegap.corpus import Leaning
from themegap.csvio import (
    read_embedding_csv,
    read_scree_csv,
    read_series_csv,
    read_table_csv,
    write_embedding_csv,
    write_lexicon_skeleton,
    write_mining_csv,
    write_scree_csv,
    write_series_csv,
    write_table_csv,
)
from themegap.errors import DataError
from themegap.lexicon import Topic, load_lexicon, mine_frequent_bigrams
from themegap.metrics import DiscrepancySeries, SeriesKind

T = Topic.SOCIAL_ISSUE


def roundtrip(write, read):
    buf = io.StringIO()
    write(buf)
    buf.seek(0)
    return read(buf)


def sample_table():
    counts = np.array([[50, 10, 7], [3, 40, 11]], dtype=np.int64)
    return ContingencyTable(
        T, 2018, ("argus", "forum", "gazette"),
        (("gas", "price"), ("tax", "cut")), counts,
    )


class TestMiningCsv:
    def test_layout(self, synth_headlines):
        rep = mine_frequent_bigrams(synth_headlines[:2000], threshold=10)
        buf = io.StringIO()
        write_mining_csv(rep, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "bigram,year,count"
        assert len(lines) == 1 + len(rep.per_year) * len(rep.years)
        # Rows are sorted by bigram, then ascending year.
        grams = [ln.split(",")[0] for ln in lines[1:]]
        assert grams == sorted(grams)

    def test_skeleton_loads_after_labeling(self, synth_headlines):
        rep = mine_frequent_bigrams(synth_headlines[:2000], threshold=10)
        buf = io.StringIO()
        write_lexicon_skeleton(rep, buf)
        labeled = "\n".join(
            line + "economic" if line and not line.startswith("#") else line
            for line in buf.getvalue().splitlines()
        )
        lex = load_lexicon(labeled)
        assert len(lex) == len(rep.per_year)

    def test_skeleton_order_busiest_first(self, synth_headlines):
        rep = mine_frequent_bigrams(synth_headlines[:2000], threshold=10)
        buf = io.StringIO()
        write_lexicon_skeleton(rep, buf)
        grams = [
            tuple(line.split("\t")[0].split())
            for line in buf.getvalue().splitlines()
            if line and not line.startswith("#")
        ]
        totals = [rep.totals[g] for g in grams]
        assert totals == sorted(totals, reverse=True)


class TestTableCsv:
    def test_roundtrip(self):
        t = sample_table()
        got = roundtrip(
            lambda fh: write_table_csv(t, fh),
            lambda fh: read_table_csv(fh, T, 2018),
        )
        assert got.outlets == t.outlets
        assert got.ngrams == t.ngrams
        assert np.array_equal(got.counts, t.counts)
        assert got.topic is T and got.year == 2018

    def test_header_required(self):
        with pytest.raises(DataError, match="header"):
            read_table_csv(io.StringIO("foo,bar\n1,2\n"), T, 2018)

    def test_ragged_row(self):
        text = "ngram,a,b\ngas price,1\n"
        with pytest.raises(DataError, match="line 2"):
            read_table_csv(io.StringIO(text), T, 2018)

    def test_non_integer_cell(self):
        text = "ngram,a,b\ngas price,1,x\n"
        with pytest.raises(DataError, match="line 2"):
            read_table_csv(io.StringIO(text), T, 2018)

    def test_empty_body(self):
        with pytest.raises(DataError, match="no data"):
            read_table_csv(io.StringIO("ngram,a,b\n"), T, 2018)


def sample_embedding():
    return ca_embed(sample_table())


LEANINGS = {
    "argus": Leaning.LEFT, "forum": Leaning.CENTRAL, "gazette": Leaning.RIGHT,
}


class TestEmbeddingCsv:
    def test_roundtrip_exact(self):
        emb = sample_embedding()
        ebuf, sbuf = io.StringIO(), io.StringIO()
        write_embedding_csv(emb, LEANINGS, ebuf)
        write_scree_csv(emb, sbuf)
        ebuf.seek(0)
        sbuf.seek(0)
        got, leanings = read_embedding_csv(ebuf, T, 2018, sbuf)
        assert tuple(got.outlet_points) == tuple(emb.outlet_points)
        # repr() formatting makes the float round-trip exact, not approximate.
        for name in emb.outlet_points:
            assert got.outlet_points[name] == emb.outlet_points[name]
        assert got.singular_values == emb.singular_values
        assert got.total_inertia == pytest.approx(emb.total_inertia, rel=1e-15)
        assert got.explained_2d == pytest.approx(emb.explained_2d, rel=1e-15)
        assert leanings == LEANINGS

    def test_roundtrip_without_scree(self):
        emb = sample_embedding()
        buf = io.StringIO()
        write_embedding_csv(emb, LEANINGS, buf)
        buf.seek(0)
        got, _ = read_embedding_csv(buf, T, 2018)
        assert got.singular_values == ()
        assert got.total_inertia == 0.0
        assert got.explained_2d == 1.0
        assert got.outlet_points == emb.outlet_points

    def test_header_required(self):
        with pytest.raises(DataError, match="header"):
            read_embedding_csv(io.StringIO("a,b\n"), T, 2018)

    def test_duplicate_outlet(self):
        text = "outlet,dim1,dim2,leaning\nargus,0.0,0.0,left\nargus,1.0,1.0,left\n"
        with pytest.raises(DataError, match="duplicate"):
            read_embedding_csv(io.StringIO(text), T, 2018)

    def test_bad_leaning(self):
        text = "outlet,dim1,dim2,leaning\nargus,0.0,0.0,upward\n"
        with pytest.raises(DataError, match="line 2"):
            read_embedding_csv(io.StringIO(text), T, 2018)

    def test_bad_float(self):
        text = "outlet,dim1,dim2,leaning\nargus,zero,0.0,left\n"
        with pytest.raises(DataError, match="line 2"):
            read_embedding_csv(io.StringIO(text), T, 2018)

    def test_empty_body(self):
        with pytest.raises(DataError, match="no data"):
            read_embedding_csv(io.StringIO("outlet,dim1,dim2,leaning\n"), T, 2018)

    def test_scree_roundtrip(self):
        emb = sample_embedding()
        got = roundtrip(
            lambda fh: write_scree_csv(emb, fh),
            read_scree_csv,
        )
        assert got == emb.singular_values

    def test_scree_fractions_sum_to_one(self):
        emb = sample_embedding()
        buf = io.StringIO()
        write_scree_csv(emb, buf)
        rows = buf.getvalue().splitlines()[1:]
        fracs = [float(r.split(",")[2]) for r in rows]
        assert math.fsum(fracs) == pytest.approx(1.0, abs=1e-12)


class TestSeriesCsv:
    def sample(self):
        return DiscrepancySeries(
            T, SeriesKind.CENTROID_DISTANCE, "argus",
            {2014: 0.1 + 0.2, 2015: None, 2016: 1.0 / 3.0},
        )

    def test_roundtrip_exact(self):
        s = self.sample()
        got = roundtrip(lambda fh: write_series_csv(s, fh), read_series_csv)
        assert len(got) == 1
        assert got[0] == s

    def test_na_cell(self):
        buf = io.StringIO()
        write_series_csv(self.sample(), buf)
        rows = buf.getvalue().splitlines()
        assert rows[0] == "topic,kind,outlet_or_blank,year,value_or_NA"
        assert rows[2].endswith(",2015,NA")

    def test_blank_outlet_for_mad(self):
        s = DiscrepancySeries(T, SeriesKind.CLUSTER_MAD, None, {2014: 1.0})
        buf = io.StringIO()
        write_series_csv(s, buf)
        assert ",cluster_mad,," in buf.getvalue().splitlines()[1]
        buf.seek(0)
        got = read_series_csv(buf)
        assert got[0].outlet is None

    def test_multiple_series_grouped(self):
        s1 = self.sample()
        s2 = DiscrepancySeries(T, SeriesKind.CLUSTER_MAD, None, {2014: 2.0})
        buf = io.StringIO()
        write_series_csv(s1, buf)
        # Append the second series' data rows to the same stream.
        buf2 = io.StringIO()
        write_series_csv(s2, buf2)
        buf.write("".join(buf2.getvalue().splitlines(keepends=True)[1:]))
        buf.seek(0)
        got = read_series_csv(buf)
        assert {(g.kind, g.outlet) for g in got} == {
            (SeriesKind.CENTROID_DISTANCE, "argus"), (SeriesKind.CLUSTER_MAD, None),
        }

    def test_header_required(self):
        with pytest.raises(DataError, match="header"):
            read_series_csv(io.StringIO("topic,kind\n"))

    def test_bad_year(self):
        text = "topic,kind,outlet_or_blank,year,value_or_NA\nsocial,cluster_mad,,20x4,1.0\n"
        with pytest.raises(DataError, match="line 2"):
            read_series_csv(io.StringIO(text))

    def test_bad_topic(self):
        text = "topic,kind,outlet_or_blank,year,value_or_NA\nsports,cluster_mad,,2014,1.0\n"
        with pytest.raises(DataError, match="line 2"):
            read_series_csv(io.StringIO(text))
