
import pytest
from hypothesis import given, strategies as st

from policy_index.corpus import Corpus, Document
from policy_index.textproc import Lexicon, load_lexicon, segment, term_frequencies, tile, top_terms, TermCounts


def test_exact_tiling():
    assert segment("疫情防控", Lexicon.from_words(["疫情", "防控"])) == ["疫情", "防控"]


def test_longest_match_wins():
    assert segment("新冠肺炎", Lexicon.from_words(["新冠", "新冠肺炎"])) == ["新冠肺炎"]


def test_single_char_fallback():
    assert segment("X贷款", Lexicon.from_words(["贷款"])) == ["X", "贷款"]


def test_empty_text():
    assert segment("", Lexicon.from_words(["a"])) == []


def test_stopwords_and_punctuation_removed():
    lex = Lexicon.from_words(["疫情", "的", "防控"], stopwords=["的"])
    assert segment("疫情的，防控。 ", lex) == ["疫情", "防控"]


def test_lexicon_invariants():
    lex = Lexicon.from_words(["ab", "abcd", "x"])
    assert lex.max_entry_len == 4
    with pytest.raises(ValueError):
        Lexicon.from_words([])


def test_load_lexicon(tmp_path):
    (tmp_path / "lex.txt").write_text("疫情\n\n防控\n# comment\n", encoding="utf-8")
    (tmp_path / "stop.txt").write_text("的\n", encoding="utf-8")
    lex = load_lexicon(tmp_path / "lex.txt", tmp_path / "stop.txt")
    assert lex.entries == {"疫情", "防控"}
    assert lex.stopwords == {"的"}


def test_term_frequencies_empty_corpus():
    tc = term_frequencies(Corpus(), Lexicon.from_words(["a"]))
    assert tc.counts == {} and tc.total == 0


def test_term_frequencies_hand_count():
    lex = Lexicon.from_words(["疫情", "防控"])
    corpus = Corpus((Document("2020-01-01", "Hubei", "", "疫情 疫情 防控"),))
    tc = term_frequencies(corpus, lex)
    assert tc.counts == {"疫情": 2, "防控": 1}
    assert tc.total == 3


def test_term_frequencies_doubles_for_duplicate_docs():
    lex = Lexicon.from_words(["疫情", "防控"])
    doc = Document("2020-01-01", "Hubei", "防控", "疫情 疫情 防控")
    one = term_frequencies(Corpus((doc,)), lex)
    two = term_frequencies(Corpus((doc, doc)), lex)
    assert two.counts == {k: 2 * v for k, v in one.counts.items()}
    assert two.total == 2 * one.total


def test_title_and_body_not_joined():
    lex = Lexicon.from_words(["ab"])
    doc = Document("2020-01-01", "r", "a", "b")
    assert term_frequencies(Corpus((doc,)), lex).counts == {"a": 1, "b": 1}


@pytest.mark.parametrize(
    "counts, n, expected",
    [
        ({"a": 3, "b": 1}, 1, [("a", 3)]),
        ({"a": 2, "b": 2}, 2, [("a", 2), ("b", 2)]),
        ({"b": 2, "a": 2}, 2, [("a", 2), ("b", 2)]),
        ({"a": 3}, 0, []),
        ({"a": 3, "b": 1}, 10, [("a", 3), ("b", 1)]),
    ],
)
def test_top_terms(counts, n, expected):
    assert top_terms(TermCounts(counts, sum(counts.values())), n) == expected


alphabet = st.sampled_from(list("ab贷款疫情 ，"))
words = st.lists(st.text(alphabet, min_size=1, max_size=4), min_size=1, max_size=6)


@given(st.text(alphabet, max_size=40), words)
def test_tiling_reconstructs_input(text, entries):
    lex = Lexicon.from_words(entries)
    assert "".join(tile(text, lex)) == text


@given(st.lists(st.text(alphabet, max_size=15), max_size=6), st.lists(st.text(alphabet, max_size=15), max_size=6), words)
def test_term_frequencies_additive(bodies_a, bodies_b, entries):
    lex = Lexicon.from_words(entries)
    A = [Document("2020-01-01", "A", "", b) for b in bodies_a]
    B = [Document("2020-01-02", "B", "", b) for b in bodies_b]
    joint = term_frequencies(Corpus(tuple(A + B)), lex)
    split = term_frequencies(Corpus(tuple(A)), lex) + term_frequencies(Corpus(tuple(B)), lex)
    assert joint == split
    assert joint.total == sum(joint.counts.values())


@given(st.dictionaries(st.text(min_size=1, max_size=3), st.integers(1, 5), max_size=10), st.integers(0, 12))
def test_top_terms_deterministic_and_sorted(counts, n):
    tc = TermCounts(counts, sum(counts.values()))
    out = top_terms(tc, n)
    assert out == top_terms(TermCounts(dict(reversed(list(counts.items()))), tc.total), n)
    assert out == sorted(out, key=lambda kv: (-kv[1], kv[0]))
    assert len(out) == min(n, len(counts))
