import datetime as dt
import io

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from hypothesis.extra.numpy import arrays

from policy_index.corpus import Corpus, Document
from policy_index.errors import DegenerateDictionaryError
from policy_index.index import (
    KeywordCountMatrix,
    KeywordDictionary,
    IndexSeries,
    build_dictionary,
    daily_keyword_counts,
    differentiation_coefficients,
    effectiveness_index,
    entropy_weights,
    load_keyword_types,
    read_index_csv,
    read_weights_csv,
    write_index_csv,
    write_weights_csv,
)
from policy_index.pipeline import DEFAULT_DATA
from policy_index.textproc import Lexicon

D0 = dt.date(2020, 1, 1)


def matrix(counts, keywords=None):
    counts = np.asarray(counts)
    n, m = counts.shape
    keywords = keywords or [f"k{j}" for j in range(m)]
    return KeywordCountMatrix([D0 + dt.timedelta(days=i) for i in range(n)], keywords, counts)


def brute_d(column):
    # direct transcription, loops only
    n = len(column)
    s = float(sum(column))
    acc = 0.0
    for c in column:
        if c:
            p = c / s
            acc += p * np.log(p)
    return 1.0 + acc / np.log(n)


LEX = Lexicon.from_words(["贷款", "疫情", "防控"])


def test_counts_empty_window():
    M = daily_keyword_counts(Corpus(), LEX, ["贷款"], "Hubei", "2020-01-01", "2020-01-05")
    assert M.counts.shape == (5, 1) and not M.counts.any()


def test_counts_hand_fixture():
    doc = Document("2020-01-01", "Hubei", "", "贷款 贷款 疫情")
    M = daily_keyword_counts(Corpus((doc,)), LEX, ["贷款"], "Hubei", "2020-01-01", "2020-01-03")
    np.testing.assert_array_equal(M.counts[:, 0], [2, 0, 0])
    M2 = daily_keyword_counts(Corpus((doc, doc)), LEX, ["贷款"], "Hubei", "2020-01-01", "2020-01-03")
    np.testing.assert_array_equal(M2.counts[:, 0], [4, 0, 0])


def test_counts_region_filter_and_pooling():
    docs = (Document("2020-01-01", "Hubei", "", "贷款"), Document("2020-01-02", "Hainan", "", "贷款"))
    hub = daily_keyword_counts(Corpus(docs), LEX, ["贷款"], "Hubei", "2020-01-01", "2020-01-02")
    pooled = daily_keyword_counts(Corpus(docs), LEX, ["贷款"], None, "2020-01-01", "2020-01-02")
    np.testing.assert_array_equal(hub.counts[:, 0], [1, 0])
    np.testing.assert_array_equal(pooled.counts[:, 0], [1, 1])


def test_counts_reject_unknown_keyword_and_bad_window():
    with pytest.raises(ValueError, match="lexicon"):
        daily_keyword_counts(Corpus(), LEX, ["口罩"], "Hubei", "2020-01-01", "2020-01-02")
    with pytest.raises(ValueError):
        daily_keyword_counts(Corpus(), LEX, ["贷款"], "Hubei", "2020-01-02", "2020-01-01")


def test_matrix_validation():
    with pytest.raises(ValueError):
        matrix([[1, -1]])
    with pytest.raises(ValueError):
        KeywordCountMatrix([D0], ["a", "b"], np.zeros((1, 3)))


def test_d_extremes():
    c = differentiation_coefficients(matrix([[5, 7], [5, 0], [5, 0], [5, 0]]))
    assert c.d[0] == pytest.approx(0.0, abs=1e-12)
    assert c.d[1] == pytest.approx(1.0, abs=1e-12)


def test_d_hand_value():
    c = differentiation_coefficients(matrix([[3], [1]]))
    expected = 1 + (0.75 * np.log(0.75) + 0.25 * np.log(0.25)) / np.log(2)
    assert c.d[0] == pytest.approx(expected, abs=1e-12)
    assert c.d[0] == pytest.approx(0.18873, abs=1e-5)


def test_zero_column_excluded_and_survivor_gets_full_weight():
    with pytest.warns(UserWarning, match="excluded"):
        D = build_dictionary(matrix([[3, 0], [1, 0]], ["a", "b"]))
    assert D.keywords == ("a",)
    np.testing.assert_allclose(D.weights, [1.0])


def test_d_needs_two_days():
    with pytest.raises(ValueError):
        differentiation_coefficients(matrix([[1, 2]]))


@pytest.mark.parametrize(
    "d, w",
    [([0.2, 0.3, 0.5], [0.2, 0.3, 0.5]), ([1.0, 1.0], [0.5, 0.5]), ([0.18873], [1.0])],
)
def test_entropy_weights(d, w):
    np.testing.assert_allclose(entropy_weights(np.array(d)), w, atol=1e-15)


def test_entropy_weights_degenerate():
    with pytest.raises(DegenerateDictionaryError):
        entropy_weights(np.zeros(3))


def test_index_hand_values():
    M = matrix([[2, 3], [0, 0]], ["k1", "k2"])
    D = KeywordDictionary(("k1", "k2"), ("A", "B"), [0.25, 0.75])
    s = effectiveness_index(M, D, "Hubei")
    np.testing.assert_allclose(s.values, [2.75, 0.0])
    one = effectiveness_index(matrix([[2], [0], [5]], ["k"]), KeywordDictionary(("k",), ("A",), [1.0]))
    np.testing.assert_array_equal(one.values, [2, 0, 5])


def test_index_rejects_missing_keyword():
    with pytest.raises(ValueError):
        effectiveness_index(matrix([[1]], ["a"]), KeywordDictionary(("b",), ("A",), [1.0]))


def test_dictionary_weight_validation():
    with pytest.raises(ValueError):
        KeywordDictionary(("a", "b"), ("A", "B"), [0.5, 0.6])


def test_shipped_dictionary():
    types = load_keyword_types(DEFAULT_DATA / "dictionary.csv")
    assert len(types) == 95
    assert set(types.values()) == set("ABCDE")
    assert types["farming"] == "E"


def test_keyword_types_duplicates_and_bad_tags(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("keyword,type\n# note\nloan,C\nloan,E\n", encoding="utf-8")
    with pytest.warns(UserWarning, match="duplicate"):
        assert load_keyword_types(p) == {"loan": "C"}
    p.write_text("keyword,type\nloan,Z\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_keyword_types(p)


def test_weights_csv_round_trip(tmp_path):
    D = build_dictionary(matrix([[3, 1, 0], [1, 1, 4], [0, 2, 2]], ["贷款", "b", "c"]), {"贷款": "C"})
    write_weights_csv(D, tmp_path / "w.csv")
    again = read_weights_csv(tmp_path / "w.csv")
    assert again.keywords == D.keywords and again.types == D.types
    np.testing.assert_array_equal(again.weights, D.weights)
    np.testing.assert_array_equal(again.d, D.d)


def test_index_csv_round_trip(tmp_path):
    dates = [D0 + dt.timedelta(days=i) for i in range(3)]
    series = [IndexSeries("Hubei", dates, [0.1, 2.0, 1 / 3]), IndexSeries("Central", dates, [0, 0, 5])]
    write_index_csv(series, tmp_path / "long.csv", tmp_path / "wide.csv")
    again = read_index_csv(tmp_path / "long.csv")
    assert [s.region for s in again] == ["Hubei", "Central"]
    for a, b in zip(again, series):
        assert a.dates == b.dates
        np.testing.assert_array_equal(a.values, b.values)
    assert (tmp_path / "wide.csv").read_text().splitlines()[0] == "date,Hubei,Central"


def test_weights_csv_to_handle():
    D = KeywordDictionary(("a",), ("A",), [1.0], [0.5])
    buf = io.StringIO()
    write_weights_csv(D, buf)
    assert buf.getvalue() == "keyword,type,d,w\na,A,0.5,1.0\n"


count_matrices = st.tuples(st.integers(2, 10), st.integers(1, 8)).flatmap(
    lambda nm: arrays(np.int64, nm, elements=st.integers(0, 50))
)


@given(count_matrices)
def test_d_in_unit_interval_and_weights_sum_to_one(counts):
    assume(counts.sum(axis=0).all())
    c = differentiation_coefficients(matrix(counts))
    assert ((c.d >= 0) & (c.d <= 1)).all()
    for j in range(counts.shape[1]):
        col = counts[:, j]
        uniform = len(set(col)) == 1
        onehot = (col > 0).sum() == 1
        assert (abs(c.d[j]) < 1e-12) == uniform
        assert (abs(c.d[j] - 1) < 1e-12) == onehot
    if c.d.sum() > 0:
        assert entropy_weights(c).sum() == pytest.approx(1.0, abs=1e-9)


@given(count_matrices, st.integers(1, 9), st.data())
def test_d_column_scale_invariant(counts, scale, data):
    assume(counts.sum(axis=0).all())
    j = data.draw(st.integers(0, counts.shape[1] - 1))
    scaled = counts.copy()
    scaled[:, j] *= scale
    np.testing.assert_allclose(
        differentiation_coefficients(matrix(scaled)).d, differentiation_coefficients(matrix(counts)).d, atol=1e-12
    )


@given(count_matrices, st.data())
def test_index_linear_in_counts(a, data):
    b = data.draw(arrays(np.int64, a.shape, elements=st.integers(0, 50)))
    w = np.full(a.shape[1], 1 / a.shape[1])
    D = KeywordDictionary(tuple(f"k{j}" for j in range(a.shape[1])), ("A",) * a.shape[1], w)
    Ma, Mb = matrix(a), matrix(b)
    np.testing.assert_allclose(
        effectiveness_index(Ma + Mb, D).values,
        effectiveness_index(Ma, D).values + effectiveness_index(Mb, D).values,
        rtol=1e-12,
    )
    assert (effectiveness_index(Ma, D).values >= 0).all()


@given(count_matrices)
def test_matches_loop_oracle(counts):
    assume(counts.sum(axis=0).all())
    c = differentiation_coefficients(matrix(counts))
    expected = [brute_d(list(counts[:, j])) for j in range(counts.shape[1])]
    np.testing.assert_allclose(c.d, np.clip(expected, 0, 1), atol=1e-12)
