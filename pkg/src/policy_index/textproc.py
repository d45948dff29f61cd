"""Lexicon-driven forward maximum-match segmentation and term counting."""
from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

__all__ = [
    "Lexicon",
    "TermCounts",
    "load_lexicon",
    "tile",
    "segment",
    "document_tokens",
    "term_frequencies",
    "top_terms",
]


@dataclass(frozen=True)
class Lexicon:
    entries: frozenset
    stopwords: frozenset = frozenset()
    max_entry_len: int = field(init=False)

    def __post_init__(self):
        entries = frozenset(e for e in self.entries if e)
        if not entries:
            raise ValueError("lexicon has no entries")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))
        object.__setattr__(self, "max_entry_len", max(len(e) for e in entries))

    @classmethod
    def from_words(cls, words: Iterable[str], stopwords: Iterable[str] = ()) -> "Lexicon":
        return cls(frozenset(words), frozenset(stopwords))

    def __contains__(self, token):
        return token in self.entries


def _read_word_list(path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [w for w in (line.strip() for line in fh) if w and not w.startswith("#")]


def load_lexicon(path, stopword_path=None) -> Lexicon:
    """Read a one-entry-per-line lexicon (and optional stopword list)."""
    stop = _read_word_list(stopword_path) if stopword_path else ()
    return Lexicon.from_words(_read_word_list(path), stop)


def tile(text: str, lex: Lexicon) -> list[str]:
    """Greedy forward maximum match covering every character of ``text``.

    ``"".join(tile(text, lex)) == text`` always holds.
    """
    out = []
    i, n = 0, len(text)
    entries, longest = lex.entries, lex.max_entry_len
    while i < n:
        for size in range(min(longest, n - i), 0, -1):
            piece = text[i : i + size]
            if size == 1 or piece in entries:
                out.append(piece)
                i += size
                break
    return out


def _is_noise(token: str) -> bool:
    # whitespace, punctuation and symbol-only tokens
    return all(ch.isspace() or unicodedata.category(ch)[0] in "PZS" for ch in token)


def segment(text: str, lex: Lexicon) -> list[str]:
    """Segment ``text`` into tokens, dropping stopwords and punctuation.

    At every position the longest lexicon entry starting there is taken; when
    none matches, the single character becomes a token.

    >>> segment("X贷款", Lexicon.from_words(["贷款"]))
    ['X', '贷款']
    """
    stop = lex.stopwords
    return [t for t in tile(text, lex) if t not in stop and not _is_noise(t)]


def document_tokens(doc, lex: Lexicon) -> list[str]:
    """Tokens of a document's title followed by its body.

    Title and body are segmented separately so no match straddles them.
    """
    return segment(doc.title, lex) + segment(doc.body, lex)


@dataclass(frozen=True)
class TermCounts:
    counts: dict
    total: int

    @classmethod
    def from_counter(cls, counter: Counter) -> "TermCounts":
        counts = {k: int(v) for k, v in counter.items() if v > 0}
        return cls(counts, sum(counts.values()))

    def __add__(self, other: "TermCounts") -> "TermCounts":
        return TermCounts.from_counter(Counter(self.counts) + Counter(other.counts))


def term_frequencies(corpus, lex: Lexicon) -> TermCounts:
    counter = Counter()
    for doc in corpus:
        counter.update(document_tokens(doc, lex))
    return TermCounts.from_counter(counter)


def top_terms(tc: TermCounts, n: int) -> list[tuple[str, int]]:
    """The ``n`` most frequent tokens, count-descending, ties lexicographic."""
    if n < 0:
        raise ValueError("n must be non-negative")
    ranked = sorted(tc.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:n]
