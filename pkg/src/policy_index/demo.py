"""Synthetic demo inputs for the end-to-end report.

The shipped copy lives in ``data/demo``; regenerate it with
``python -m policy_index.demo OUTDIR``.

Provinces echo the centre's publication intensity after a region-specific
delay, keyword families rise and fade in phases, the case series peaks in
mid-February with a one-day jump, and the stock series has gaps for weekends
and the new-year market closure.
"""
from __future__ import annotations

import datetime as dt
import json
import sys
from pathlib import Path

import numpy as np

from .index import load_keyword_types
from .pipeline import DEFAULT_DATA, write_series_csv

DEMO_DIR = DEFAULT_DATA / "demo"
START = dt.date(2020, 1, 1)
END = dt.date(2020, 4, 16)

# region -> (delay behind the centre in days, response strength)
REGIONS = {
    "Central": (0, 1.0),
    "Hubei": (2, 1.4),
    "Beijing": (4, 0.8),
    "Heilongjiang": (12, 0.5),
    "Shanghai": (5, 0.9),
    "Zhejiang": (6, 0.9),
    "Guangdong": (8, 1.0),
    "Hainan": (9, 0.7),
    "Sichuan": (10, 0.6),
    "Xinjiang": (13, 0.5),
}

DEMO_GROUPS = {
    "Central": ["Central"],
    "Hubei": ["Hubei"],
    "North": ["Beijing", "Heilongjiang"],
    "East": ["Shanghai", "Zhejiang"],
    "South": ["Guangdong", "Hainan"],
    "West": ["Sichuan", "Xinjiang"],
}

FILLER = (
    "the of and to in on for with by notice province city county office work plan "
    "measures implement strengthen promote ensure people government department "
    "relevant units all levels effectively further accordance requirements situation "
    "arrangement deployment opinions implementation local organization guidance timely "
    "comprehensive support services public novel coronavirus pneumonia prevention control "
    "period during current key areas"
).split()

# (centre day of the phase, width in days) per keyword type
PHASES = {"A": (30, 14), "B": (42, 12), "C": (75, 20), "D": (95, 14), "E": (62, 16)}


def _bump(t, centre, width):
    return np.exp(-0.5 * ((t - centre) / width) ** 2)


def _central_signal(days, rng):
    t = np.arange(days)
    wave = 0.3 + 1.5 * _bump(t, 38, 12) + 0.8 * _bump(t, 70, 18)
    bursts = np.zeros(days)
    for c in rng.choice(days, size=8, replace=False):
        bursts += 0.8 * _bump(t, c, 1.5)
    return wave + bursts


def _document(rng, types_by_tag, day_idx, tags):
    phase = np.array([_bump(day_idx, *PHASES[g]) + 0.05 for g in tags])
    main = tags[rng.choice(len(tags), p=phase / phase.sum())]
    words = list(rng.choice(types_by_tag[main], size=rng.integers(4, 10)))
    other = tags[rng.integers(len(tags))]
    words += list(rng.choice(types_by_tag[other], size=2))
    words += list(rng.choice(FILLER, size=rng.integers(15, 30)))
    rng.shuffle(words)
    title = "notice on " + " ".join(rng.choice(types_by_tag[main], size=2)) + " work"
    return title, " ".join(words)


def make_demo(outdir, seed: int = 2020) -> Path:
    """Write corpus, lexicon, group map, external series and config to ``outdir``."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    types = load_keyword_types(DEFAULT_DATA / "dictionary.csv")
    tags = sorted(set(types.values()))
    types_by_tag = {g: [k for k, v in types.items() if v == g] for g in tags}
    days = (END - START).days + 1
    dates = [START + dt.timedelta(days=i) for i in range(days)]
    weekday = np.array([0.4 if d.weekday() >= 5 else 1.0 for d in dates])

    signal = _central_signal(days + 20, rng)
    records = []
    for region, (lag, strength) in REGIONS.items():
        base = 0.3 if region != "Central" else 0.5
        for i, day in enumerate(dates):
            # provinces echo the centre after `lag` days
            level = signal[i - lag + 20] if lag else signal[i + 20]
            n_docs = rng.poisson(weekday[i] * (base + 2.0 * strength * level))
            for _ in range(n_docs):
                title, text = _document(rng, types_by_tag, i, tags)
                records.append({"region": region, "date": day.isoformat(), "title": title, "text": text})
    records.sort(key=lambda r: (r["date"], r["region"], r["title"], r["text"]))
    with open(out / "corpus.jsonl", "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")

    lexicon = sorted(set(types) | set(FILLER))
    (out / "lexicon.txt").write_text("\n".join(lexicon) + "\n", encoding="utf-8")
    (out / "stopwords.txt").write_text("\n".join(["the", "of", "and", "to", "in", "on", "for", "with", "by", "notice", "work"]) + "\n", encoding="utf-8")
    with open(out / "groups.txt", "w", encoding="utf-8", newline="\n") as fh:
        for g, members in DEMO_GROUPS.items():
            fh.write(f"{g} = {', '.join(members)}\n")

    t = np.arange(days)
    cases = 2500.0 * _bump(t, 38, 8) * (t >= 19)
    cases *= rng.lognormal(0.0, 0.25, size=days)
    cases[dates.index(dt.date(2020, 2, 13))] = 15152.0
    cases[(t > 19) & (cases < 1)] += rng.poisson(20, size=int(((t > 19) & (cases < 1)).sum()))
    write_series_csv(zip(dates, np.round(cases)), out / "covid.csv")

    closed = {dt.date(2020, 1, 1)} | {dt.date(2020, 1, 24) + dt.timedelta(days=i) for i in range(10)}
    trading = [d for d in dates if d.weekday() < 5 and d not in closed]
    s2, prev, changes = 1.0, 0.0, []
    for d in trading:
        shock = -7.5 if d == dt.date(2020, 2, 3) else 0.0
        s2 = 0.1 + 0.15 * (prev - 0.0) ** 2 + 0.75 * s2
        prev = 0.1 * prev + np.sqrt(s2) * rng.standard_normal() + shock
        changes.append(prev)
    write_series_csv(zip(trading, np.round(changes, 4)), out / "stock.csv")

    config = f"""# Demo report configuration
corpus = corpus.jsonl
lexicon = lexicon.txt
stopwords = stopwords.txt
groups = groups.txt
covid = covid.csv
stock = stock.csv
from = {START.isoformat()}
to = {END.isoformat()}
central = Central
ccf_max_lag = 14
lda_k = 5
lda_alpha = 0.5
lda_beta = 0.01
lda_iterations = 100
seed = 0
alignment_policy = zero_fill
"""
    (out / "config.txt").write_text(config, encoding="utf-8")
    return out / "config.txt"


if __name__ == "__main__":
    make_demo(sys.argv[1] if len(sys.argv) > 1 else DEMO_DIR)
