import datetime as dt

import pytest
from hypothesis import given, strategies as st

from policy_index.corpus import Corpus, Document, filter_corpus, load_corpus, save_corpus
from policy_index.errors import ValidationError

from conftest import write_jsonl


def rec(region="Hubei", date="2020-01-01", title="t", text="body"):
    return {"region": region, "date": date, "title": title, "text": text}


def test_load_two_valid_lines(tmp_path):
    path = write_jsonl(tmp_path / "c.jsonl", [rec(date="2020-02-01"), rec(region="Hainan")])
    corpus = load_corpus(path)
    assert len(corpus) == 2
    assert corpus.date_min == dt.date(2020, 1, 1)
    assert corpus.date_max == dt.date(2020, 2, 1)
    assert [d.region for d in corpus] == ["Hainan", "Hubei"]


def test_load_empty_file(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    corpus = load_corpus(path)
    assert len(corpus) == 0
    assert corpus.date_min is None and corpus.date_max is None


def test_impossible_date_names_line(tmp_path):
    path = write_jsonl(tmp_path / "c.jsonl", [rec(), rec(date="2020-13-40")])
    with pytest.raises(ValidationError) as err:
        load_corpus(path)
    assert err.value.line == 2
    assert "line 2" in str(err.value)


@pytest.mark.parametrize(
    "line",
    ['{"region": "a", "date": "2020-01-01", "title": "t"}', "not json", "[1, 2]", '{"region": "", "date": "2020-01-01", "title": "t", "text": ""}'],
)
def test_malformed_lines(tmp_path, line):
    path = write_jsonl(tmp_path / "c.jsonl", [rec(), line])
    with pytest.raises(ValidationError, match="line 2"):
        load_corpus(path)


def test_missing_file_is_io_error(tmp_path):
    with pytest.raises(OSError):
        load_corpus(tmp_path / "nope.jsonl")


def test_empty_body_and_duplicates_kept(tmp_path):
    path = write_jsonl(tmp_path / "c.jsonl", [rec(text=""), rec(text=""), rec()])
    assert len(load_corpus(path)) == 3


def test_ordering_date_region_title():
    docs = [
        Document("2020-01-02", "A", "b"),
        Document("2020-01-01", "B", "a"),
        Document("2020-01-01", "A", "z"),
        Document("2020-01-01", "A", "c"),
    ]
    keys = [(d.date.day, d.region, d.title) for d in Corpus(tuple(docs))]
    assert keys == [(1, "A", "c"), (1, "A", "z"), (1, "B", "a"), (2, "A", "b")]


def test_filter_full_range_is_identity(three_docs):
    c = Corpus(tuple(three_docs))
    assert filter_corpus(c, c.date_min, c.date_max) == c
    assert filter_corpus(c) == c


def test_filter_empty_window(three_docs):
    c = Corpus(tuple(three_docs))
    assert len(filter_corpus(c, "2021-01-01", "2021-02-01")) == 0


def test_filter_regions(three_docs):
    c = Corpus(tuple(three_docs))
    out = filter_corpus(c, regions={"Hubei"})
    assert [d.title for d in out] == ["t1", "t3"]


def test_filter_rejects_reversed_window(three_docs):
    with pytest.raises(ValueError):
        filter_corpus(Corpus(tuple(three_docs)), "2020-02-01", "2020-01-01")


documents = st.builds(
    Document,
    date=st.dates(dt.date(2019, 1, 1), dt.date(2021, 1, 1)),
    region=st.sampled_from(["Hubei", "Hainan", "Central", "北京"]),
    title=st.text(max_size=8),
    body=st.text(max_size=20),
)


@given(st.lists(documents, max_size=12))
def test_save_load_round_trip(tmp_path_factory, docs):
    path = tmp_path_factory.mktemp("rt") / "c.jsonl"
    c = Corpus(tuple(docs))
    save_corpus(c, path)
    again = load_corpus(path)
    assert again == c
    assert (again.date_min, again.date_max) == (c.date_min, c.date_max)


@given(
    st.lists(documents, max_size=12),
    st.dates(dt.date(2019, 1, 1), dt.date(2021, 1, 1)),
    st.integers(0, 400),
    st.one_of(st.none(), st.sets(st.sampled_from(["Hubei", "Hainan", "Central"]))),
)
def test_filter_idempotent_and_shrinking(docs, start, span, regions):
    c = Corpus(tuple(docs))
    end = start + dt.timedelta(days=span)
    once = filter_corpus(c, start, end, regions)
    assert filter_corpus(once, start, end, regions) == once
    assert len(once) <= len(c)
    assert all(start <= d.date <= end for d in once)
