import datetime as dt
import shutil

import numpy as np
import pandas as pd
import pytest

from policy_index.errors import AlignmentError, StageError, ValidationError
from policy_index.index import read_index_csv, read_weights_csv
from policy_index.pipeline import (
    DEFAULT_DATA,
    PipelineConfig,
    align,
    load_config,
    load_groups,
    parse_key_values,
    read_series_csv,
    run_pipeline,
    write_series_csv,
)
from policy_index.volatility import read_param_table

DEMO = DEFAULT_DATA / "demo"
D = [dt.date(2020, 1, d) for d in range(1, 8)]


@pytest.fixture(scope="module")
def report(tmp_path_factory):
    out = tmp_path_factory.mktemp("report")
    bundle = run_pipeline(load_config(DEMO / "config.txt"), out)
    return out, bundle


# --- config -------------------------------------------------------------------


def test_demo_config_resolves_paths():
    cfg = load_config(DEMO / "config.txt")
    assert cfg.corpus_path == DEMO / "corpus.jsonl"
    assert cfg.window == (dt.date(2020, 1, 1), dt.date(2020, 4, 16))
    assert cfg.dictionary_path == DEFAULT_DATA / "dictionary.csv"
    assert cfg.ccf_max_lag == 14 and cfg.alignment_policy == "zero_fill"


def test_config_overrides_and_validation(tmp_path):
    assert load_config(DEMO / "config.txt", seed=9).seed == 9
    with pytest.raises(ValidationError, match="ccf_max_lag"):
        load_config(DEMO / "config.txt", ccf_max_lag=7)
    text = (DEMO / "config.txt").read_text().replace("ccf_max_lag = 14", "ccf_max_lag = 7")
    (tmp_path / "c.txt").write_text(text)
    with pytest.raises(ValidationError):
        load_config(tmp_path / "c.txt")


@pytest.mark.parametrize(
    "body, match",
    [
        ("corpus = a\nbogus = 1\nfrom = 2020-01-01\nto = 2020-01-02\n", "unknown key"),
        ("from = 2020-02-30\n", "bad date"),
        ("lda_k = two\n", "bad value"),
        ("corpus = a\n", "'from' and 'to'"),
        ("corpus = a\ncorpus = b\n", "duplicate"),
        ("just words\n", "key = value"),
    ],
)
def test_config_errors(tmp_path, body, match):
    (tmp_path / "c.txt").write_text(body)
    with pytest.raises(ValidationError, match=match):
        load_config(tmp_path / "c.txt")


def test_config_reversed_window():
    with pytest.raises(ValidationError):
        PipelineConfig("c", "l", "d", "g", "v", "s", ("2020-02-01", "2020-01-01"))


def test_parse_key_values_comments(tmp_path):
    (tmp_path / "kv.txt").write_text("# c\n\na = 1 = 2\n b=x \n")
    assert parse_key_values(tmp_path / "kv.txt") == {"a": "1 = 2", "b": "x"}


def test_default_group_map():
    groups = load_groups(DEFAULT_DATA / "groups.txt")
    assert list(groups) == ["Central", "Hubei", "North", "East", "South", "West"]
    provinces = [r for g in groups.values() for r in g]
    assert len(provinces) == len(set(provinces)) == 32


# --- series and alignment -------------------------------------------------------


def test_series_csv_round_trip(tmp_path):
    pairs = [(D[1], 2.5), (D[0], 1 / 3)]
    write_series_csv(pairs, tmp_path / "s.csv")
    assert read_series_csv(tmp_path / "s.csv") == sorted(pairs)


@pytest.mark.parametrize("body", ["day,value\n", "date,value\n2020-01-01,x\n", "date,value\n2020-01-01,1\n2020-01-01,2\n"])
def test_series_csv_errors(tmp_path, body):
    (tmp_path / "s.csv").write_text(body)
    with pytest.raises(ValidationError):
        read_series_csv(tmp_path / "s.csv")


def test_align_identical_calendars():
    a = [(d, float(i)) for i, d in enumerate(D)]
    panel = align({"a": a, "b": a}, "drop_closed_days")
    assert panel.dates == tuple(D)
    np.testing.assert_array_equal(panel.series["a"], np.arange(7.0))
    assert panel.filled == {"a": 0, "b": 0}


def test_align_zero_fill_weekends():
    days = [dt.date(2020, 1, 1) + dt.timedelta(days=i) for i in range(14)]
    cases = [(d, 1.0 + i) for i, d in enumerate(days)]
    stock = [(d, 5.0) for d in days if d.weekday() < 5]
    panel = align({"covid": cases, "stock": stock}, "zero_fill")
    frame = panel.to_frame()
    weekend = [d.weekday() >= 5 for d in frame.index]
    assert (frame.loc[weekend, "stock"] == 0).all()
    assert (frame.loc[[not w for w in weekend], "stock"] == 5).all()
    np.testing.assert_array_equal(frame["covid"], 1.0 + np.arange(14))
    assert panel.policy == "zero_fill" and panel.filled["stock"] == sum(weekend)


def test_align_single_shared_date():
    panel = align({"a": [(D[0], 1), (D[1], 2)], "b": [(D[1], 3), (D[2], 4)], "c": [(D[1], 5)]}, "drop_closed_days")
    assert panel.dates == (D[1],)
    assert {k: list(v) for k, v in panel.series.items()} == {"a": [2.0], "b": [3.0], "c": [5.0]}


def test_align_errors():
    with pytest.raises(AlignmentError):
        align({"a": [(D[0], 1)], "b": [(D[1], 1)]}, "drop_closed_days")
    with pytest.raises(ValueError):
        align({"a": [(D[1], 1), (D[0], 1)]}, "zero_fill")
    with pytest.raises(ValueError):
        align({"a": [(D[0], 1)]}, "forward_fill")


# --- report ---------------------------------------------------------------------


EXPECTED = [
    "corpus_summary",
    "terms",
    "lda_topics",
    "weights",
    "excluded_keywords",
    "index_long",
    "index_wide",
    "panel",
    "alignment",
    "adf",
    "adf_table",
    "ccf",
    "classify",
    "dcc_params",
    "covariance",
    "group_volatility",
]


def test_report_emits_all_artifacts(report):
    out, bundle = report
    assert list(bundle) == EXPECTED
    assert all(p.exists() and p.stat().st_size > 0 for p in bundle.values())
    svgs = sorted(p.name for p in (out / "charts").glob("*.svg"))
    assert "series_covid.svg" in svgs and "cov_Central_covid.svg" in svgs
    assert sum(n.startswith("group_") for n in svgs) == 6


def test_report_tables_round_trip(report):
    out, _ = report
    weights = read_weights_csv(out / "weights.csv")
    assert weights.weights.sum() == pytest.approx(1.0, abs=1e-9)
    index = read_index_csv(out / "index_long.csv")
    assert len(index) == 10 and all(len(s.dates) == 107 for s in index)
    wide = pd.read_csv(out / "index_wide.csv", index_col=0)
    np.testing.assert_allclose(wide["Hubei"].to_numpy(), next(s for s in index if s.region == "Hubei").values)
    params = read_param_table(out / "dcc_params.csv")
    assert params.shape == (17, 5)
    assert params.index[-2:].tolist() == ["[Joint]dcca1", "[Joint]dccb1"]


def test_report_classify_and_adf_shapes(report):
    out, _ = report
    cls = pd.read_csv(out / "classify.csv")
    assert list(cls.columns) == ["region", "right_volatility_bias", "short_negative", "long_positive"]
    assert cls["region"].iloc[-1] == "Count" and len(cls) == 10
    assert cls.iloc[-1, 1:].astype(int).tolist() == cls.iloc[:-1, 1:].astype(str).eq("True").sum().tolist()
    adf = pd.read_csv(out / "adf_table.csv")
    assert list(adf.columns) == ["series", "NCtype(p)", "Ctype(p)", "CTtype(p)"]
    assert adf["series"].tolist() == ["Central", "covid", "stock"]


def test_report_alignment_metadata(report):
    meta = pd.read_csv(report[0] / "alignment.csv")
    assert set(meta["policy"]) == {"zero_fill"}
    assert meta.set_index("series").loc["stock", "filled_dates"] > 0


def test_report_groups(report):
    vols = pd.read_csv(report[0] / "group_volatility.csv")
    assert sorted(vols["group"].unique()) == sorted(["Central", "Hubei", "North", "East", "South", "West"])
    assert (vols["value"] > 0).all()


def test_stage_error_names_stage(tmp_path):
    shutil.copytree(DEMO, tmp_path / "demo")
    (tmp_path / "demo" / "stock.csv").write_text("date,value\n2019-01-01,1\n")
    cfg = load_config(tmp_path / "demo" / "config.txt", alignment_policy="drop_closed_days")
    with pytest.raises(StageError) as err:
        run_pipeline(cfg, tmp_path / "out", make_charts=False)
    assert err.value.stage == "align"
    assert isinstance(err.value.error, AlignmentError)


def test_missing_central_region(tmp_path):
    cfg = load_config(DEMO / "config.txt", central="Atlantis")
    with pytest.raises(StageError) as err:
        run_pipeline(cfg, tmp_path, make_charts=False)
    assert err.value.stage == "ingest"
