"""Command-line entry point: ``policy-index <subcommand> ...``.

Exit codes: 0 success, 2 validation error, 3 estimation error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import logging
import sys
from pathlib import Path

import numpy as np
import pandas as pd

from .corpus import filter_corpus, load_corpus, save_corpus
from .diagnostics import adf_test, ccf, classification_counts, classify_ccf
from .errors import EstimationError, StageError
from .index import (
    build_dictionary,
    daily_keyword_counts,
    effectiveness_index,
    load_keyword_types,
    read_index_csv,
    read_weights_csv,
    write_index_csv,
    write_weights_csv,
)
from .pipeline import DEFAULT_DATA, align, load_config, load_groups, read_series_csv, run_pipeline
from .textproc import document_tokens, load_lexicon, term_frequencies, top_terms
from .topics import fit_lda, format_topic
from .volatility import (
    GARCH_PARAMS,
    TABLE_COLUMNS,
    covariance_frame,
    fit_ar1_garch11,
    fit_dcc_garch,
    group_volatility,
    param_table,
    write_param_table,
)

EXIT_OK, EXIT_VALIDATION, EXIT_ESTIMATION, EXIT_IO = 0, 2, 3, 4


def _out(args):
    if getattr(args, "out", None):
        return open(args.out, "w", encoding="utf-8", newline="")
    return contextlib.nullcontext(sys.stdout)


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def _corpus(args):
    corpus = load_corpus(args.corpus)
    return filter_corpus(corpus, getattr(args, "start", None), getattr(args, "end", None))


def _lexicon(args):
    return load_lexicon(args.lexicon, args.stopwords)


def _add_text_args(p, window=True):
    p.add_argument("--corpus", required=True, help="JSON-lines corpus file")
    p.add_argument("--lexicon", required=True, help="one entry per line")
    p.add_argument("--stopwords", help="one stopword per line")
    if window:
        p.add_argument("--from", dest="start", help="first day, YYYY-MM-DD")
        p.add_argument("--to", dest="end", help="last day, YYYY-MM-DD")


def _window(args, corpus):
    start = args.start or corpus.date_min
    end = args.end or corpus.date_max
    if start is None or end is None:
        raise ValueError("empty corpus and no --from/--to window")
    return start, end


def cmd_ingest(args):
    corpus = load_corpus(args.corpus)
    regions = args.regions.split(",") if args.regions else None
    corpus = filter_corpus(corpus, args.start, args.end, regions)
    if args.save:
        save_corpus(corpus, args.save)
    with _out(args) as fh:
        w = _writer(fh)
        w.writerow(["region", "documents", "date_min", "date_max"])
        for region in corpus.regions:
            days = [d.date for d in corpus if d.region == region]
            w.writerow([region, len(days), min(days).isoformat(), max(days).isoformat()])


def cmd_freq(args):
    tc = term_frequencies(_corpus(args), _lexicon(args))
    with _out(args) as fh:
        w = _writer(fh)
        w.writerow(["token", "count"])
        w.writerows(top_terms(tc, args.top))


def cmd_lda(args):
    lex = _lexicon(args)
    docs = [t for t in (document_tokens(d, lex) for d in _corpus(args)) if t]
    model = fit_lda(docs, args.k, args.alpha, args.beta, args.iters, args.seed)
    with _out(args) as fh:
        for k in range(model.K):
            fh.write(f"topic_{k}: {format_topic(model, k, args.top)}\n")


def _dictionary(args, corpus, lex):
    types = load_keyword_types(args.dictionary)
    keywords = [k for k in types if k in lex.entries]
    start, end = _window(args, corpus)
    return types, keywords, start, end


def cmd_weights(args):
    corpus, lex = _corpus(args), _lexicon(args)
    types, keywords, start, end = _dictionary(args, corpus, lex)
    d = build_dictionary(daily_keyword_counts(corpus, lex, keywords, None, start, end), types)
    write_weights_csv(d, args.out or sys.stdout)


def cmd_index(args):
    corpus, lex = _corpus(args), _lexicon(args)
    types, keywords, start, end = _dictionary(args, corpus, lex)
    regions = args.regions.split(",") if args.regions else corpus.regions
    matrices = {r: daily_keyword_counts(corpus, lex, keywords, r, start, end) for r in regions}
    if args.weights:
        d = read_weights_csv(args.weights)
    else:
        pooled = daily_keyword_counts(corpus, lex, keywords, None, start, end)
        d = build_dictionary(pooled, types)
    series = [effectiveness_index(matrices[r], d, r) for r in regions]
    write_index_csv(series, args.out or sys.stdout, args.wide)


def _read_named_series(path):
    pairs = read_series_csv(path)
    return np.array([v for _, v in pairs]), [d for d, _ in pairs]


def cmd_adf(args):
    specs = ["NC", "C", "CT"] if args.spec == "all" else [args.spec.upper()]
    with _out(args) as fh:
        w = _writer(fh)
        w.writerow(["series", "spec", "statistic", "p_value", "lags"])
        for path in args.series:
            x, _ = _read_named_series(path)
            for spec in specs:
                r = adf_test(x, spec, args.lags)
                w.writerow([Path(path).stem, spec, repr(r.statistic), repr(r.p_value), r.lags])


def _index_panel(path, central):
    series = {s.region: s for s in read_index_csv(path)}
    if central not in series:
        raise ValueError(f"central region {central!r} not in {path}")
    return series


def cmd_ccf(args):
    series = _index_panel(args.index, args.central)
    x = series[args.central].values
    with _out(args) as fh:
        w = _writer(fh)
        w.writerow(["region", "lag", "rho"])
        for region, s in series.items():
            if region == args.central:
                continue
            c = ccf(s.values, x, args.max_lag)
            w.writerows((region, int(k), repr(float(v))) for k, v in zip(c.lags, c.rho))


def cmd_classify(args):
    series = _index_panel(args.index, args.central)
    x = series[args.central].values
    results = []
    with _out(args) as fh:
        w = _writer(fh)
        w.writerow(["region", "right_volatility_bias", "short_negative", "long_positive"])
        for region, s in series.items():
            if region == args.central:
                continue
            cls = classify_ccf(ccf(s.values, x, args.max_lag))
            results.append(cls)
            w.writerow([region, cls.right_volatility_bias, cls.short_negative, cls.long_positive])
        totals = classification_counts(results)
        w.writerow(["Count", totals["right_volatility_bias"], totals["short_negative"], totals["long_positive"]])


def cmd_garch(args):
    x, _ = _read_named_series(args.series)
    name = args.name or Path(args.series).stem
    f = fit_ar1_garch11(x, name=name, seed=args.seed)
    table = pd.DataFrame(
        np.column_stack([f.params, f.se, f.tvalues, f.pvalues]),
        index=pd.Index([f"[{name}].{p}" for p in GARCH_PARAMS], name="parameter"),
        columns=list(TABLE_COLUMNS),
    )
    write_param_table(table, args.out or sys.stdout)


def _dcc_frame(paths, names, policy):
    names = names.split(",") if names else [Path(p).stem for p in paths]
    if len(names) != len(paths):
        raise ValueError("--names must match the number of series files")
    panel = align({n: read_series_csv(p) for n, p in zip(names, paths)}, policy)
    return panel.to_frame()


def cmd_dcc(args):
    paths = [p for item in args.series for p in item.split(",") if p]
    fit = fit_dcc_garch(_dcc_frame(paths, args.names, args.policy), seed=args.seed)
    write_param_table(param_table(fit, footnotes=args.footnotes), args.out or sys.stdout)
    if args.cov_out:
        cov = covariance_frame(fit)
        with open(args.cov_out, "w", encoding="utf-8", newline="") as fh:
            w = _writer(fh)
            w.writerow(["date", "pair", "value"])
            for day, row in zip(cov.index, cov.to_numpy()):
                w.writerows((day.isoformat(), c, repr(float(v))) for c, v in zip(cov.columns, row))


def cmd_groups(args):
    series = {s.region: s for s in read_index_csv(args.index)}
    groups = load_groups(args.groups)
    regions = [r for r in series if any(r in m for m in groups.values())]
    frame = pd.DataFrame({r: series[r].values for r in regions}, index=pd.Index(series[regions[0]].dates, name="date"))
    fit = fit_dcc_garch(frame, seed=args.seed)
    pos = {r: i for i, r in enumerate(regions)}
    members = {g: [pos[r] for r in m if r in pos] for g, m in groups.items()}
    vols = group_volatility(fit.H_path, {g: m for g, m in members.items() if m})
    with _out(args) as fh:
        w = _writer(fh)
        w.writerow(["date", "group", "value"])
        for t, day in enumerate(fit.dates):
            w.writerows((day.isoformat(), g, repr(float(v[t]))) for g, v in vols.items())


def cmd_report(args):
    cfg_path = DEFAULT_DATA / "demo" / "config.txt" if args.demo else args.config
    if cfg_path is None:
        raise ValueError("give --config FILE or --demo")
    overrides = {"seed": args.seed} if args.seed is not None else {}
    bundle = run_pipeline(load_config(cfg_path, **overrides), args.out, make_charts=not args.no_charts)
    for name, path in bundle.items():
        print(f"{name}\t{path}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="policy-index", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a corpus and summarise it per region")
    p.add_argument("corpus")
    p.add_argument("--from", dest="start")
    p.add_argument("--to", dest="end")
    p.add_argument("--regions", help="comma-separated region filter")
    p.add_argument("--save", help="write the filtered corpus here")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("freq", help="term-frequency table")
    _add_text_args(p)
    p.add_argument("--top", type=int, default=50)
    p.add_argument("--out")
    p.set_defaults(func=cmd_freq)

    p = sub.add_parser("lda", help="fit an LDA topic model")
    _add_text_args(p)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float, default=0.01)
    p.add_argument("--iters", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--top", type=int, default=8, help="words shown per topic")
    p.add_argument("--out")
    p.set_defaults(func=cmd_lda)

    for name, func, help_ in (("weights", cmd_weights, "entropy weights per keyword"), ("index", cmd_index, "daily effectiveness index per region")):
        p = sub.add_parser(name, help=help_)
        _add_text_args(p)
        p.add_argument("--dictionary", default=str(DEFAULT_DATA / "dictionary.csv"))
        p.add_argument("--out")
        if name == "index":
            p.add_argument("--weights", help="reuse a weights CSV instead of recomputing")
            p.add_argument("--regions", help="comma-separated regions (default: all)")
            p.add_argument("--wide", help="also write the date-by-region pivot here")
        p.set_defaults(func=func)

    p = sub.add_parser("adf", help="augmented Dickey-Fuller test on date,value series")
    p.add_argument("series", nargs="+")
    p.add_argument("--spec", choices=["nc", "c", "ct", "all"], default="all")
    p.add_argument("--lags", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_adf)

    for name, func in (("ccf", cmd_ccf), ("classify", cmd_classify)):
        p = sub.add_parser(name, help="cross-correlation of each region with the centre" if name == "ccf" else "lead/lag property flags per region")
        p.add_argument("--index", required=True, help="long index CSV (date,region,value)")
        p.add_argument("--central", default="Central")
        p.add_argument("--max-lag", type=int, default=14)
        p.add_argument("--out")
        p.set_defaults(func=func)

    p = sub.add_parser("garch", help="AR(1)-GARCH(1,1) fit of one date,value series")
    p.add_argument("--series", required=True)
    p.add_argument("--name")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_garch)

    p = sub.add_parser("dcc", help="two-stage DCC-GARCH fit of several date,value series")
    p.add_argument("--series", required=True, nargs="+", help="FILE[,FILE...]")
    p.add_argument("--names", help="comma-separated series names")
    p.add_argument("--policy", choices=["drop_closed_days", "zero_fill"], default="drop_closed_days")
    p.add_argument("--footnotes", action="store_true", help="add the boundary note column")
    p.add_argument("--cov-out", help="write the covariance path (date,pair,value) here")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dcc)

    p = sub.add_parser("groups", help="group volatility series from regional indices")
    p.add_argument("--index", required=True)
    p.add_argument("--groups", default=str(DEFAULT_DATA / "groups.txt"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_groups)

    p = sub.add_parser("report", help="run the whole pipeline from a config file")
    p.add_argument("--config")
    p.add_argument("--demo", action="store_true", help="use the shipped synthetic demo")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int)
    p.add_argument("--no-charts", action="store_true")
    p.set_defaults(func=cmd_report)
    return parser


def _exit_code(exc) -> int:
    if isinstance(exc, StageError):
        exc = exc.error
    if isinstance(exc, EstimationError):
        return EXIT_ESTIMATION
    if isinstance(exc, OSError):
        return EXIT_IO
    if isinstance(exc, ValueError):
        return EXIT_VALIDATION
    raise exc


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except Exception as exc:  # mapped to exit codes below
        code = _exit_code(exc)
        print(f"error: {exc}", file=sys.stderr)
        return code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
