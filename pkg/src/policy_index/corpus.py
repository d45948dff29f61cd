"""Loading, saving and filtering the dated, region-tagged document corpus.

The on-disk format is JSON lines: one flat object per line with the keys
``region``, ``date`` (``YYYY-MM-DD``), ``title`` and ``text``.
"""
from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import ValidationError

__all__ = ["Document", "Corpus", "load_corpus", "save_corpus", "filter_corpus", "parse_date"]

FIELDS = ("region", "date", "title", "text")


def parse_date(value) -> dt.date:
    """Parse ``YYYY-MM-DD`` (or pass a date through unchanged)."""
    if isinstance(value, dt.datetime):
        return value.date()
    if isinstance(value, dt.date):
        return value
    return dt.date.fromisoformat(str(value).strip())


@dataclass(frozen=True, order=True)
class Document:
    """One government document. Field order doubles as the sort key."""

    date: dt.date
    region: str
    title: str
    body: str = ""

    def __post_init__(self):
        if not isinstance(self.date, dt.date):
            object.__setattr__(self, "date", parse_date(self.date))
        if not self.region:
            raise ValueError("document region must be non-empty")

    def to_record(self) -> dict:
        return {
            "region": self.region,
            "date": self.date.isoformat(),
            "title": self.title,
            "text": self.body,
        }


@dataclass(frozen=True)
class Corpus:
    """Immutable, deterministically ordered collection of documents."""

    documents: tuple = ()
    date_min: Optional[dt.date] = field(default=None, compare=False)
    date_max: Optional[dt.date] = field(default=None, compare=False)

    def __post_init__(self):
        docs = tuple(sorted(self.documents))
        object.__setattr__(self, "documents", docs)
        if docs:
            object.__setattr__(self, "date_min", docs[0].date)
            object.__setattr__(self, "date_max", docs[-1].date)
        else:
            object.__setattr__(self, "date_min", None)
            object.__setattr__(self, "date_max", None)

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def regions(self) -> list[str]:
        return sorted({d.region for d in self.documents})


def _parse_line(raw: str, lineno: int) -> Document:
    try:
        rec = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"not a JSON object ({exc.msg})", lineno) from None
    if not isinstance(rec, dict):
        raise ValidationError("record is not a key-value object", lineno)
    missing = [k for k in FIELDS if k not in rec]
    if missing:
        raise ValidationError(f"missing field(s) {', '.join(missing)}", lineno)
    for key in FIELDS:
        if not isinstance(rec[key], str):
            raise ValidationError(f"field {key!r} must be a string", lineno)
    if not rec["region"].strip():
        raise ValidationError("empty region", lineno)
    try:
        date = dt.date.fromisoformat(rec["date"])
    except ValueError:
        raise ValidationError(f"unparseable date {rec['date']!r}", lineno) from None
    return Document(date=date, region=rec["region"], title=rec["title"], body=rec["text"])


def load_corpus(path) -> Corpus:
    """Read a JSON-lines corpus file.

    Blank lines are skipped. A malformed line raises
    :class:`~policy_index.errors.ValidationError` carrying its 1-based line
    number; an unreadable file raises :class:`OSError`.
    """
    docs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            docs.append(_parse_line(raw, lineno))
    return Corpus(tuple(docs))


def save_corpus(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for doc in corpus:
            fh.write(json.dumps(doc.to_record(), ensure_ascii=False, sort_keys=True))
            fh.write("\n")


def filter_corpus(
    corpus: Corpus,
    start=None,
    end=None,
    regions: Optional[Iterable[str]] = None,
) -> Corpus:
    """Keep documents dated within ``[start, end]`` and in ``regions``.

    Either date bound may be ``None`` (unbounded). ``regions=None`` keeps every
    region.
    """
    start = parse_date(start) if start is not None else None
    end = parse_date(end) if end is not None else None
    if start is not None and end is not None and start > end:
        raise ValueError(f"empty window: {start} > {end}")
    keep = None if regions is None else frozenset(regions)
    out = [
        d
        for d in corpus
        if (start is None or d.date >= start)
        and (end is None or d.date <= end)
        and (keep is None or d.region in keep)
    ]
    return Corpus(tuple(out))
