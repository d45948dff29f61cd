# %% [markdown]
# # Entropy-weighted keyword index
#
# Keywords concentrated on few days receive high differentiation
# coefficients and therefore large weights; evenly spread keywords get
# weights near zero.

# %%
import numpy as np

from policy_index.corpus import load_corpus
from policy_index.index import (
    KeywordCountMatrix,
    build_dictionary,
    daily_keyword_counts,
    differentiation_coefficients,
    effectiveness_index,
    index_frame,
    load_keyword_types,
)
from policy_index.pipeline import DEFAULT_DATA
from policy_index.textproc import load_lexicon

toy = KeywordCountMatrix(range(4), ["even", "burst", "mixed"], np.array([[5, 7, 3], [5, 0, 1], [5, 0, 0], [5, 0, 0]]))
print(differentiation_coefficients(toy).d.round(4))
print(build_dictionary(toy).weights.round(4))

# %% [markdown]
# On the demo corpus, weights are computed once from counts pooled over all
# regions and then applied to each region's daily counts.

# %%
demo = DEFAULT_DATA / "demo"
corpus = load_corpus(demo / "corpus.jsonl")
lex = load_lexicon(demo / "lexicon.txt", demo / "stopwords.txt")
types = load_keyword_types(DEFAULT_DATA / "dictionary.csv")
keywords = [k for k in types if k in lex.entries]
start, end = corpus.date_min, corpus.date_max

pooled = daily_keyword_counts(corpus, lex, keywords, None, start, end)
dictionary = build_dictionary(pooled, types)
order = np.argsort(-dictionary.weights)[:8]
for j in order:
    print(f"{dictionary.keywords[j]:>14} {dictionary.types[j]}  d={dictionary.d[j]:.3f}  w={dictionary.weights[j]:.4f}")

# %%
series = [effectiveness_index(daily_keyword_counts(corpus, lex, keywords, r, start, end), dictionary, r) for r in ("Central", "Hubei", "Xinjiang")]
frame = index_frame(series)
print(frame.rolling(7).mean().iloc[::14].round(2))
