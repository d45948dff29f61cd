"""Configuration, series alignment and the end-to-end report."""
from __future__ import annotations

import contextlib
import csv
import datetime as dt
import logging
from dataclasses import MISSING, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from . import charts
from .corpus import filter_corpus, load_corpus, parse_date
from .diagnostics import ADF_SPECS, adf_test, ccf, classification_counts, classify_ccf
from .errors import AlignmentError, DegenerateSeriesError, StageError, ValidationError
from .index import (
    build_dictionary,
    daily_keyword_counts,
    effectiveness_index,
    load_keyword_types,
    write_index_csv,
    write_weights_csv,
)
from .textproc import document_tokens, load_lexicon, term_frequencies, top_terms
from .topics import fit_lda, format_topic
from .volatility import covariance_frame, fit_dcc_garch, group_volatility, param_table, write_param_table

log = logging.getLogger(__name__)

__all__ = [
    "ALIGNMENT_POLICIES",
    "PipelineConfig",
    "AlignedPanel",
    "parse_key_values",
    "load_config",
    "load_groups",
    "read_series_csv",
    "write_series_csv",
    "align",
    "run_pipeline",
]

ALIGNMENT_POLICIES = ("drop_closed_days", "zero_fill")
DEFAULT_DATA = Path(__file__).parent / "data"


# --- flat key-value files ---------------------------------------------------


def parse_key_values(path) -> dict:
    """``key = value`` per line; ``#`` starts a comment line."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValidationError(f"{path}: expected 'key = value'", lineno)
            key, value = (s.strip() for s in line.split("=", 1))
            if not key:
                raise ValidationError(f"{path}: empty key", lineno)
            if key in out:
                raise ValidationError(f"{path}: duplicate key {key!r}", lineno)
            out[key] = value
    return out


def load_groups(path) -> dict:
    """Group map file: ``name = region, region, ...``."""
    groups = {}
    for name, value in parse_key_values(path).items():
        members = [r.strip() for r in value.split(",") if r.strip()]
        if not members:
            raise ValidationError(f"{path}: group {name!r} is empty")
        groups[name] = members
    return groups


@dataclass(frozen=True)
class PipelineConfig:
    corpus_path: Path
    lexicon_path: Path
    dictionary_path: Path
    group_map_path: Path
    covid_path: Path
    stock_path: Path
    window: tuple
    stopword_path: Optional[Path] = None
    central: str = "Central"
    ccf_max_lag: int = 14
    lda_k: int = 5
    lda_alpha: Optional[float] = None
    lda_beta: float = 0.01
    lda_iterations: int = 200
    lda_top_words: int = 8
    top_terms: int = 50
    seed: int = 0
    alignment_policy: str = "zero_fill"

    def __post_init__(self):
        start, end = (parse_date(d) for d in self.window)
        object.__setattr__(self, "window", (start, end))
        if start > end:
            raise ValidationError(f"window start {start} is after end {end}")
        if self.ccf_max_lag < 8:
            raise ValidationError("ccf_max_lag must be >= 8 for the lag classifier")
        if self.lda_k < 1:
            raise ValidationError("lda_k must be >= 1")
        if self.lda_iterations < 1:
            raise ValidationError("lda_iterations must be >= 1")
        if self.alignment_policy not in ALIGNMENT_POLICIES:
            raise ValidationError(f"alignment_policy must be one of {ALIGNMENT_POLICIES}")


# config key -> (field name, converter)
_CONFIG_KEYS = {
    "corpus": ("corpus_path", Path),
    "lexicon": ("lexicon_path", Path),
    "stopwords": ("stopword_path", Path),
    "dictionary": ("dictionary_path", Path),
    "groups": ("group_map_path", Path),
    "covid": ("covid_path", Path),
    "stock": ("stock_path", Path),
    "central": ("central", str),
    "ccf_max_lag": ("ccf_max_lag", int),
    "lda_k": ("lda_k", int),
    "lda_alpha": ("lda_alpha", float),
    "lda_beta": ("lda_beta", float),
    "lda_iterations": ("lda_iterations", int),
    "lda_top_words": ("lda_top_words", int),
    "top_terms": ("top_terms", int),
    "seed": ("seed", int),
    "alignment_policy": ("alignment_policy", str),
}
_PATH_FIELDS = {f for f, conv in _CONFIG_KEYS.values() if conv is Path}


def load_config(path, **overrides) -> PipelineConfig:
    """Read a flat key-value config file.

    Relative paths resolve against the config file's directory. ``from`` and
    ``to`` give the analysis window. ``dictionary`` and ``groups`` default to
    the shipped files.
    """
    path = Path(path)
    raw = parse_key_values(path)
    kwargs = {"dictionary_path": DEFAULT_DATA / "dictionary.csv", "group_map_path": DEFAULT_DATA / "groups.txt"}
    window = [None, None]
    for key, value in raw.items():
        if key in ("from", "to"):
            try:
                window[key == "to"] = parse_date(value)
            except ValueError:
                raise ValidationError(f"{path}: bad date for {key!r}: {value!r}") from None
            continue
        if key not in _CONFIG_KEYS:
            raise ValidationError(f"{path}: unknown key {key!r}")
        name, conv = _CONFIG_KEYS[key]
        try:
            val = conv(value)
        except ValueError:
            raise ValidationError(f"{path}: bad value for {key!r}: {value!r}") from None
        if name in _PATH_FIELDS and not val.is_absolute():
            val = path.parent / val
        kwargs[name] = val
    kwargs.update(overrides)
    if "window" not in kwargs:
        if None in window:
            raise ValidationError(f"{path}: 'from' and 'to' are required")
        kwargs["window"] = tuple(window)
    required = [f.name for f in fields(PipelineConfig) if f.default is MISSING]
    absent = [r for r in required if r not in kwargs]
    if absent:
        raise ValidationError(f"{path}: missing required keys for {absent}")
    return PipelineConfig(**kwargs)


# --- external series --------------------------------------------------------


def read_series_csv(path) -> list:
    """``date,value`` CSV into a date-sorted list of ``(date, float)``."""
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        rows = csv.reader(fh)
        header = next(rows, None)
        if header is None or [h.strip() for h in header[:2]] != ["date", "value"]:
            raise ValidationError(f"{path}: expected header 'date,value'")
        for lineno, row in enumerate(rows, start=2):
            if not row:
                continue
            try:
                out.append((dt.date.fromisoformat(row[0].strip()), float(row[1])))
            except (ValueError, IndexError):
                raise ValidationError(f"{path}: bad row {row!r}", lineno) from None
    out.sort(key=lambda p: p[0])
    days = [d for d, _ in out]
    if len(set(days)) != len(days):
        raise ValidationError(f"{path}: duplicate dates")
    return out


def write_series_csv(pairs, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "value"])
        for day, v in pairs:
            w.writerow([day.isoformat(), repr(float(v))])


@dataclass(frozen=True)
class AlignedPanel:
    dates: tuple
    series: dict
    policy: str = "drop_closed_days"
    filled: dict = field(default_factory=dict)  # name -> number of filled dates

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.series, index=pd.Index(self.dates, name="date"))


def align(series_map: dict, policy: str = "drop_closed_days") -> AlignedPanel:
    """Put several ``(date, value)`` sequences on one calendar.

    ``drop_closed_days`` keeps the dates every series has; ``zero_fill`` keeps
    every date any series has and writes 0 where a series is missing (the
    convention for market-closure days).
    """
    if policy not in ALIGNMENT_POLICIES:
        raise ValueError(f"policy must be one of {ALIGNMENT_POLICIES}")
    lookup = {}
    for name, pairs in series_map.items():
        days = [parse_date(d) for d, _ in pairs]
        if any(a >= b for a, b in zip(days, days[1:])):
            raise ValueError(f"series {name!r} is not strictly sorted by date")
        lookup[name] = dict(zip(days, (float(v) for _, v in pairs)))
    day_sets = [set(m) for m in lookup.values()]
    if policy == "drop_closed_days":
        dates = sorted(set.intersection(*day_sets)) if day_sets else []
        if not dates:
            raise AlignmentError("series share no dates")
    else:
        dates = sorted(set.union(*day_sets)) if day_sets else []
    series = {n: np.array([m.get(d, 0.0) for d in dates]) for n, m in lookup.items()}
    filled = {n: sum(d not in m for d in dates) for n, m in lookup.items()}
    return AlignedPanel(tuple(dates), series, policy, filled)


# --- report -----------------------------------------------------------------


@contextlib.contextmanager
def _stage(name):
    log.info("stage %s", name)
    try:
        yield
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


def _fmt(v) -> str:
    return repr(float(v))


def _write_rows(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _safe_name(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in name)


def run_pipeline(cfg: PipelineConfig, outdir, make_charts: bool = True) -> dict:
    """Run every stage and write the report bundle into ``outdir``.

    Returns a mapping from artifact name to path. Stage failures surface as
    :class:`~policy_index.errors.StageError` naming the stage.
    """
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    chart_dir = out / "charts"
    if make_charts:
        chart_dir.mkdir(exist_ok=True)
    bundle = {}
    start, end = cfg.window

    with _stage("ingest"):
        corpus = filter_corpus(load_corpus(cfg.corpus_path), start, end)
        lex = load_lexicon(cfg.lexicon_path, cfg.stopword_path)
        regions = corpus.regions
        if cfg.central not in regions:
            raise ValidationError(f"central region {cfg.central!r} has no documents in the window")
        path = out / "corpus_summary.csv"
        counts = pd.Series([d.region for d in corpus]).value_counts()
        _write_rows(path, ["region", "documents"], [(r, int(counts[r])) for r in regions])
        bundle["corpus_summary"] = path

    with _stage("freq"):
        path = out / "terms.csv"
        _write_rows(path, ["token", "count"], top_terms(term_frequencies(corpus, lex), cfg.top_terms))
        bundle["terms"] = path

    with _stage("lda"):
        docs = [document_tokens(d, lex) for d in corpus]
        docs = [d for d in docs if d]
        model = fit_lda(docs, cfg.lda_k, cfg.lda_alpha, cfg.lda_beta, cfg.lda_iterations, cfg.seed)
        path = out / "lda_topics.txt"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for k in range(model.K):
                fh.write(f"topic_{k}: {format_topic(model, k, cfg.lda_top_words)}\n")
        bundle["lda_topics"] = path

    with _stage("weights"):
        types = load_keyword_types(cfg.dictionary_path)
        keywords = [k for k in types if k in lex.entries]
        unmatched = [k for k in types if k not in lex.entries]
        if unmatched:
            log.warning("dictionary keywords missing from lexicon: %s", unmatched)
        matrices = {r: daily_keyword_counts(corpus, lex, keywords, r, start, end) for r in regions}
        pooled = matrices[regions[0]]
        for r in regions[1:]:
            pooled = pooled + matrices[r]
        dictionary = build_dictionary(pooled, types)
        path = out / "weights.csv"
        write_weights_csv(dictionary, path)
        bundle["weights"] = path
        excluded = [k for k in keywords if k not in dictionary.keywords] + unmatched
        path = out / "excluded_keywords.csv"
        _write_rows(path, ["keyword", "reason"], [(k, "not in lexicon" if k in unmatched else "zero count") for k in excluded])
        bundle["excluded_keywords"] = path

    with _stage("index"):
        series = [effectiveness_index(matrices[r], dictionary, r) for r in regions]
        write_index_csv(series, out / "index_long.csv", out / "index_wide.csv")
        bundle["index_long"] = out / "index_long.csv"
        bundle["index_wide"] = out / "index_wide.csv"
        by_region = {s.region: s for s in series}
        if make_charts:
            for s in series:
                charts.line_chart(chart_dir / f"index_{_safe_name(s.region)}.svg", s.dates, {s.region: s.values}, f"Policy effectiveness index: {s.region}")

    with _stage("align"):
        central = by_region[cfg.central]
        panel = align(
            {
                cfg.central: list(zip(central.dates, central.values)),
                "covid": read_series_csv(cfg.covid_path),
                "stock": read_series_csv(cfg.stock_path),
            },
            cfg.alignment_policy,
        )
        frame = panel.to_frame()
        frame = frame[(frame.index >= start) & (frame.index <= end)]
        if len(frame) < 50:
            raise AlignmentError(f"only {len(frame)} aligned dates in the window")
        path = out / "panel.csv"
        _write_rows(path, ["date"] + list(frame.columns), [[d.isoformat()] + [_fmt(v) for v in row] for d, row in zip(frame.index, frame.to_numpy())])
        bundle["panel"] = path
        path = out / "alignment.csv"
        _write_rows(path, ["series", "filled_dates", "policy"], [(n, panel.filled[n], panel.policy) for n in panel.series])
        bundle["alignment"] = path
        if make_charts:
            for name in ("covid", "stock"):
                charts.line_chart(chart_dir / f"series_{name}.svg", frame.index, {name: frame[name]}, name)

    with _stage("adf"):
        rows, table3 = [], []
        for name in frame.columns:
            cells = [name]
            for spec in ADF_SPECS:
                res = adf_test(frame[name].to_numpy(), spec)
                rows.append((name, spec, _fmt(res.statistic), _fmt(res.p_value), res.lags))
                cells.append(f"{res.statistic:.4f}({res.p_value:.2f})")
            table3.append(cells)
        _write_rows(out / "adf.csv", ["series", "spec", "statistic", "p_value", "lags"], rows)
        _write_rows(out / "adf_table.csv", ["series", "NCtype(p)", "Ctype(p)", "CTtype(p)"], table3)
        bundle["adf"] = out / "adf.csv"
        bundle["adf_table"] = out / "adf_table.csv"

    with _stage("ccf"):
        K = cfg.ccf_max_lag
        ccf_rows, class_rows, classes = [], [], []
        for region in regions:
            if region == cfg.central:
                continue
            try:
                c = ccf(by_region[region].values, central.values, K)
            except DegenerateSeriesError:
                log.warning("region %s has a constant index; skipped in CCF", region)
                continue
            ccf_rows.extend((region, k, _fmt(c.at(k))) for k in range(-K, K + 1))
            cls = classify_ccf(c)
            classes.append(cls)
            class_rows.append((region, cls.right_volatility_bias, cls.short_negative, cls.long_positive))
            if make_charts:
                charts.line_chart(chart_dir / f"ccf_{_safe_name(region)}.svg", c.lags, {region: c.rho}, f"CCF {region} vs {cfg.central}")
        _write_rows(out / "ccf.csv", ["region", "lag", "rho"], ccf_rows)
        totals = classification_counts(classes)
        class_rows.append(("Count", totals["right_volatility_bias"], totals["short_negative"], totals["long_positive"]))
        _write_rows(out / "classify.csv", ["region", "right_volatility_bias", "short_negative", "long_positive"], class_rows)
        bundle["ccf"] = out / "ccf.csv"
        bundle["classify"] = out / "classify.csv"

    with _stage("dcc"):
        fit = fit_dcc_garch(frame, seed=cfg.seed)
        write_param_table(param_table(fit, footnotes=True), out / "dcc_params.csv")
        cov = covariance_frame(fit)
        _write_long(out / "covariance.csv", "pair", cov)
        bundle["dcc_params"] = out / "dcc_params.csv"
        bundle["covariance"] = out / "covariance.csv"
        if make_charts:
            for col in cov.columns:
                charts.line_chart(chart_dir / f"cov_{_safe_name(col)}.svg", cov.index, {col: cov[col]}, f"Conditional covariance {col}")

    with _stage("groups"):
        groups = load_groups(cfg.group_map_path)
        usable = [r for r in regions if np.ptp(by_region[r].values) > 0]
        members = {g: [r for r in rs if r in usable] for g, rs in groups.items()}
        for g, rs in members.items():
            if not rs:
                log.warning("group %s has no usable regions; skipped", g)
        members = {g: rs for g, rs in members.items() if rs}
        in_groups = [r for r in usable if any(r in rs for rs in members.values())]
        rows = []
        if len(in_groups) >= 2:
            idx = pd.Index(by_region[in_groups[0]].dates, name="date")
            data = pd.DataFrame({r: by_region[r].values for r in in_groups}, index=idx)
            gfit = fit_dcc_garch(data, seed=cfg.seed)
            pos = {r: i for i, r in enumerate(in_groups)}
            vols = group_volatility(gfit.H_path, {g: [pos[r] for r in rs] for g, rs in members.items()})
            for t, day in enumerate(gfit.dates):
                rows.extend((day.isoformat(), g, _fmt(v[t])) for g, v in vols.items())
            if make_charts:
                for g, v in vols.items():
                    charts.line_chart(chart_dir / f"group_{_safe_name(g)}.svg", gfit.dates, {g: v}, f"Group volatility: {g}")
        else:
            log.warning("fewer than two usable regions; group volatility skipped")
        _write_rows(out / "group_volatility.csv", ["date", "group", "value"], rows)
        bundle["group_volatility"] = out / "group_volatility.csv"

    return bundle


def _write_long(path, key, frame: pd.DataFrame) -> None:
    rows = []
    for day, row in zip(frame.index, frame.to_numpy()):
        label = day.isoformat() if hasattr(day, "isoformat") else str(day)
        rows.extend((label, col, _fmt(v)) for col, v in zip(frame.columns, row))
    _write_rows(path, ["date", key, "value"], rows)
