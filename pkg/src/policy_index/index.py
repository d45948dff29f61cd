"""Entropy-weighted keyword dictionary and the daily effectiveness index.

For a day-by-keyword count matrix with ``n`` days, each keyword's counts are
turned into a distribution over days, its normalised Shannon entropy is
subtracted from one to give a differentiation coefficient ``d_j`` and the
coefficients are normalised across keywords into weights ``w_j``.  The index
on day ``i`` is ``sum_j w_j * count_ij``.
"""
from __future__ import annotations

import contextlib
import csv
import datetime as dt
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from .corpus import parse_date
from .errors import DegenerateDictionaryError
from .textproc import document_tokens

__all__ = [
    "TYPE_TAGS",
    "KeywordCountMatrix",
    "DifferentiationCoefficients",
    "KeywordDictionary",
    "IndexSeries",
    "date_range",
    "daily_keyword_counts",
    "differentiation_coefficients",
    "entropy_weights",
    "build_dictionary",
    "effectiveness_index",
    "load_keyword_types",
    "write_weights_csv",
    "read_weights_csv",
    "index_frame",
    "write_index_csv",
    "read_index_csv",
]

TYPE_TAGS = ("A", "B", "C", "D", "E")


def date_range(start, end) -> list[dt.date]:
    start, end = parse_date(start), parse_date(end)
    if start > end:
        raise ValueError(f"empty window: {start} > {end}")
    return [start + dt.timedelta(days=i) for i in range((end - start).days + 1)]


@dataclass(frozen=True)
class KeywordCountMatrix:
    dates: tuple
    keywords: tuple
    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts)
        if counts.shape != (len(self.dates), len(self.keywords)):
            raise ValueError(
                f"counts shape {counts.shape} != ({len(self.dates)}, {len(self.keywords)})"
            )
        if (counts < 0).any():
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "keywords", tuple(self.keywords))
        object.__setattr__(self, "counts", counts)

    def __add__(self, other: "KeywordCountMatrix") -> "KeywordCountMatrix":
        if self.dates != other.dates or self.keywords != other.keywords:
            raise ValueError("matrices differ in dates or keywords")
        return KeywordCountMatrix(self.dates, self.keywords, self.counts + other.counts)


@dataclass(frozen=True)
class DifferentiationCoefficients:
    keywords: tuple
    d: np.ndarray
    excluded: tuple = ()  # keywords dropped for an all-zero column


@dataclass(frozen=True)
class KeywordDictionary:
    keywords: tuple
    types: tuple
    weights: np.ndarray
    d: Optional[np.ndarray] = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if len(w) != len(self.keywords) or len(self.types) != len(self.keywords):
            raise ValueError("keywords, types and weights differ in length")
        if (w < 0).any() or abs(w.sum() - 1.0) > 1e-9:
            raise ValueError("weights must be non-negative and sum to 1")
        object.__setattr__(self, "keywords", tuple(self.keywords))
        object.__setattr__(self, "types", tuple(self.types))
        object.__setattr__(self, "weights", w)

    def weight_of(self, keyword: str) -> float:
        return float(self.weights[self.keywords.index(keyword)])


@dataclass(frozen=True)
class IndexSeries:
    region: str
    dates: tuple
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if len(values) != len(self.dates):
            raise ValueError("dates and values differ in length")
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "values", values)

    def to_series(self) -> pd.Series:
        return pd.Series(self.values, index=pd.Index(self.dates, name="date"), name=self.region)


def daily_keyword_counts(corpus, lex, keywords: Sequence[str], region, start, end) -> KeywordCountMatrix:
    """Count dictionary keywords per calendar day for one region.

    ``region=None`` pools every region. Days without documents give zero rows.
    """
    missing = [k for k in keywords if k not in lex.entries]
    if missing:
        raise ValueError(f"keywords not in lexicon (never matchable): {missing}")
    days = date_range(start, end)
    row_of = {d: i for i, d in enumerate(days)}
    col_of = {k: j for j, k in enumerate(keywords)}
    counts = np.zeros((len(days), len(keywords)), dtype=np.int64)
    for doc in corpus:
        if region is not None and doc.region != region:
            continue
        i = row_of.get(doc.date)
        if i is None:
            continue
        for tok in document_tokens(doc, lex):
            j = col_of.get(tok)
            if j is not None:
                counts[i, j] += 1
    return KeywordCountMatrix(tuple(days), tuple(keywords), counts)


def differentiation_coefficients(M: KeywordCountMatrix) -> DifferentiationCoefficients:
    """``d_j = 1 + (1 / ln n) * sum_i p_ij ln p_ij`` with ``0 ln 0 = 0``.

    Keywords never observed in the window have no day distribution; they are
    left out and reported in ``excluded`` (a warning is also issued).
    """
    n = len(M.dates)
    if n < 2:
        raise ValueError("need at least two days")
    counts = M.counts.astype(float)
    col = counts.sum(axis=0)
    live = col > 0
    excluded = tuple(k for k, ok in zip(M.keywords, live) if not ok)
    if excluded:
        warnings.warn(f"keywords with zero counts excluded: {list(excluded)}", stacklevel=2)
    p = counts[:, live] / col[live]
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(p > 0, p * np.log(p), 0.0)
    d = 1.0 + plogp.sum(axis=0) / np.log(n)
    # round-off can push uniform columns a hair below zero
    d = np.clip(d, 0.0, 1.0)
    kept = tuple(k for k, ok in zip(M.keywords, live) if ok)
    return DifferentiationCoefficients(kept, d, excluded)


def entropy_weights(d) -> np.ndarray:
    """Normalise differentiation coefficients across keywords."""
    d = np.asarray(getattr(d, "d", d), dtype=float)
    total = d.sum()
    if d.size == 0 or total <= 0:
        raise DegenerateDictionaryError("all differentiation coefficients are zero")
    return d / total


def build_dictionary(M: KeywordCountMatrix, types: Optional[dict] = None) -> KeywordDictionary:
    """Differentiation coefficients and weights for every observed keyword."""
    coeffs = differentiation_coefficients(M)
    w = entropy_weights(coeffs)
    types = types or {}
    tags = tuple(types.get(k, "") for k in coeffs.keywords)
    return KeywordDictionary(coeffs.keywords, tags, w, coeffs.d)


def effectiveness_index(M: KeywordCountMatrix, dictionary: KeywordDictionary, region="") -> IndexSeries:
    col_of = {k: j for j, k in enumerate(M.keywords)}
    missing = [k for k in dictionary.keywords if k not in col_of]
    if missing:
        raise ValueError(f"dictionary keywords absent from count matrix: {missing}")
    cols = [col_of[k] for k in dictionary.keywords]
    values = M.counts[:, cols].astype(float) @ dictionary.weights
    return IndexSeries(region, M.dates, values)


# --- file formats -----------------------------------------------------------


def _sink(target):
    """Open ``target`` for CSV writing unless it already is a text handle."""
    if hasattr(target, "write"):
        return contextlib.nullcontext(target)
    return open(target, "w", encoding="utf-8", newline="")


def load_keyword_types(path) -> dict:
    """Read a ``keyword,type`` CSV into an ordered ``{keyword: type}`` map.

    Lines starting with ``#`` are comments. A keyword listed twice keeps its
    first type and triggers a warning.
    """
    out = {}
    with open(path, encoding="utf-8", newline="") as fh:
        rows = csv.reader(line for line in fh if not line.lstrip().startswith("#"))
        header = next(rows, None)
        if header is None or [h.strip() for h in header[:2]] != ["keyword", "type"]:
            raise ValueError(f"{path}: expected header 'keyword,type'")
        for row in rows:
            if not row or not row[0].strip():
                continue
            kw = row[0].strip()
            tag = row[1].strip() if len(row) > 1 else ""
            if tag and tag not in TYPE_TAGS:
                raise ValueError(f"{path}: unknown type tag {tag!r} for {kw!r}")
            if kw in out:
                warnings.warn(f"duplicate keyword {kw!r} ignored", stacklevel=2)
                continue
            out[kw] = tag
    return out


def write_weights_csv(dictionary: KeywordDictionary, path) -> None:
    d = dictionary.d if dictionary.d is not None else np.full(len(dictionary.keywords), np.nan)
    with _sink(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["keyword", "type", "d", "w"])
        for kw, tag, dj, wj in zip(dictionary.keywords, dictionary.types, d, dictionary.weights):
            w.writerow([kw, tag, repr(float(dj)), repr(float(wj))])


def read_weights_csv(path) -> KeywordDictionary:
    df = pd.read_csv(path, dtype={"keyword": str, "type": str}, keep_default_na=False, float_precision="round_trip")
    return KeywordDictionary(
        tuple(df["keyword"]),
        tuple(df["type"]),
        df["w"].to_numpy(float),
        df["d"].to_numpy(float),
    )


def index_frame(series: Sequence[IndexSeries]) -> pd.DataFrame:
    """Wide frame: one row per date, one column per region."""
    return pd.concat([s.to_series() for s in series], axis=1)


def write_index_csv(series: Sequence[IndexSeries], long_path, wide_path=None) -> None:
    with _sink(long_path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "region", "value"])
        for s in series:
            for day, v in zip(s.dates, s.values):
                w.writerow([day.isoformat(), s.region, repr(float(v))])
    if wide_path is not None:
        with open(wide_path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["date"] + [s.region for s in series])
            dates = series[0].dates if series else ()
            for i, day in enumerate(dates):
                w.writerow([day.isoformat()] + [repr(float(s.values[i])) for s in series])


def read_index_csv(path) -> list[IndexSeries]:
    """Reload the long ``date,region,value`` file."""
    df = pd.read_csv(path, dtype={"region": str}, keep_default_na=False, float_precision="round_trip")
    out = []
    for region, grp in df.groupby("region", sort=False):
        dates = tuple(dt.date.fromisoformat(x) for x in grp["date"])
        out.append(IndexSeries(region, dates, grp["value"].to_numpy(float)))
    return out
