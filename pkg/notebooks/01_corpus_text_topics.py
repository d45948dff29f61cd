# %% [markdown]
# # From documents to tokens and topics
#
# Load the synthetic demo corpus, segment it with a forward maximum-match
# lexicon, count terms and fit a small topic model.

# %%
from collections import Counter

from policy_index.corpus import filter_corpus, load_corpus
from policy_index.pipeline import DEFAULT_DATA
from policy_index.textproc import Lexicon, document_tokens, load_lexicon, segment, term_frequencies, top_terms
from policy_index.topics import fit_lda, format_topic

demo = DEFAULT_DATA / "demo"
corpus = load_corpus(demo / "corpus.jsonl")
print(len(corpus), "documents from", corpus.date_min, "to", corpus.date_max)
print(Counter(d.region for d in corpus).most_common(3))

# %% [markdown]
# Segmentation prefers the longest lexicon entry and falls back to single
# characters, so nothing in the input is lost before stopword removal.

# %%
toy = Lexicon.from_words(["新冠", "新冠肺炎", "防控"], stopwords=["的"])
print(segment("新冠肺炎的防控X", toy))

# %%
lex = load_lexicon(demo / "lexicon.txt", demo / "stopwords.txt")
february = filter_corpus(corpus, "2020-02-01", "2020-02-29")
for token, count in top_terms(term_frequencies(february, lex), 10):
    print(f"{token:>14} {count}")

# %% [markdown]
# A five-topic model on the same tokens. The sampler is deterministic for a
# given seed.

# %%
docs = [t for t in (document_tokens(d, lex) for d in corpus) if t]
model = fit_lda(docs, K=5, alpha=0.5, iterations=100, seed=0)
for k in range(model.K):
    print(f"topic_{k}: {format_topic(model, k, 6)}")
