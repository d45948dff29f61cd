"""Text-derived policy effectiveness index and DCC-GARCH volatility analysis.

Modules
-------
corpus       dated, region-tagged document corpus
textproc     forward maximum-match segmentation and term counts
topics       LDA by collapsed Gibbs sampling
index        entropy-weighted keyword dictionary and daily index
diagnostics  ACF, Ljung-Box, ADF, cross-correlation and lag classification
volatility   AR(1)-GARCH(1,1), DCC(1,1), covariance paths, group volatility
pipeline     configuration, alignment and the end-to-end report
"""
from .corpus import Corpus, Document, filter_corpus, load_corpus, save_corpus
from .diagnostics import acf, adf_test, ccf, classify_ccf, ljung_box
from .index import (
    build_dictionary,
    daily_keyword_counts,
    differentiation_coefficients,
    effectiveness_index,
    entropy_weights,
)
from .textproc import Lexicon, segment, term_frequencies, top_terms
from .topics import fit_lda, top_words
from .volatility import (
    dcc_covariance_series,
    fit_ar1_garch11,
    fit_dcc,
    fit_dcc_garch,
    group_volatility,
    param_table,
)

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "Document",
    "filter_corpus",
    "load_corpus",
    "save_corpus",
    "acf",
    "adf_test",
    "ccf",
    "classify_ccf",
    "ljung_box",
    "build_dictionary",
    "daily_keyword_counts",
    "differentiation_coefficients",
    "effectiveness_index",
    "entropy_weights",
    "Lexicon",
    "segment",
    "term_frequencies",
    "top_terms",
    "fit_lda",
    "top_words",
    "dcc_covariance_series",
    "fit_ar1_garch11",
    "fit_dcc",
    "fit_dcc_garch",
    "group_volatility",
    "param_table",
]
