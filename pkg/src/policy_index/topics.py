"""LDA topic model fitted by collapsed Gibbs sampling."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = ["TopicModel", "fit_lda", "top_words", "format_topic"]


@dataclass(frozen=True)
class TopicModel:
    K: int
    vocab: tuple
    phi: np.ndarray  # K x V topic-word probabilities
    theta: np.ndarray  # D x K document-topic probabilities
    alpha: float
    beta: float
    seed: int
    iterations: int
    assignments: np.ndarray  # final topic of every token, corpus order


@njit(cache=True)
def _gibbs_sweeps(words, docs, z, n_kw, n_dk, n_k, alpha, beta, uniforms):
    K, V = n_kw.shape
    vbeta = V * beta
    probs = np.empty(K)
    n_iter, n_tok = uniforms.shape
    for it in range(n_iter):
        for i in range(n_tok):
            w = words[i]
            d = docs[i]
            k = z[i]
            n_kw[k, w] -= 1
            n_dk[d, k] -= 1
            n_k[k] -= 1
            total = 0.0
            for t in range(K):
                total += (n_dk[d, t] + alpha) * (n_kw[t, w] + beta) / (n_k[t] + vbeta)
                probs[t] = total
            u = uniforms[it, i] * total
            k = 0
            while k < K - 1 and probs[k] <= u:
                k += 1
            z[i] = k
            n_kw[k, w] += 1
            n_dk[d, k] += 1
            n_k[k] += 1


def fit_lda(docs, K=5, alpha=None, beta=0.01, iterations=500, seed=0) -> TopicModel:
    """Fit LDA to tokenised documents by collapsed Gibbs sampling.

    Parameters
    ----------
    docs : list of list of str
        Tokenised documents. Empty documents are skipped with a warning.
    K : int
        Number of topics.
    alpha, beta : float
        Symmetric Dirichlet priors on document-topic and topic-word
        distributions. ``alpha`` defaults to ``50 / K``.
    iterations : int
        Full sweeps over all tokens.
    seed : int
        Seed for the initial assignment and every sampling draw; the fit is a
        deterministic function of its arguments.

    Returns
    -------
    TopicModel
        ``phi`` and ``theta`` are the Dirichlet-smoothed estimates computed from
        the final assignment.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if alpha is None:
        alpha = 50.0 / K
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")

    kept = []
    for i, doc in enumerate(docs):
        if len(doc) == 0:
            warnings.warn(f"document {i} is empty after tokenisation; skipped", stacklevel=2)
            continue
        kept.append(list(doc))
    if not kept:
        raise ValueError("corpus has no non-empty documents")

    vocab = tuple(sorted({w for doc in kept for w in doc}))
    index = {w: j for j, w in enumerate(vocab)}
    words = np.array([index[w] for doc in kept for w in doc], dtype=np.int64)
    doc_ids = np.repeat(np.arange(len(kept), dtype=np.int64), [len(d) for d in kept])
    D, V, N = len(kept), len(vocab), len(words)

    rng = np.random.default_rng(seed)
    z = rng.integers(0, K, size=N).astype(np.int64)
    n_kw = np.zeros((K, V), dtype=np.int64)
    n_dk = np.zeros((D, K), dtype=np.int64)
    np.add.at(n_kw, (z, words), 1)
    np.add.at(n_dk, (doc_ids, z), 1)
    n_k = n_kw.sum(axis=1)

    # chunked to bound memory on large corpora
    chunk = max(1, min(iterations, 2_000_000 // max(N, 1)))
    done = 0
    while done < iterations:
        step = min(chunk, iterations - done)
        _gibbs_sweeps(words, doc_ids, z, n_kw, n_dk, n_k, float(alpha), float(beta), rng.random((step, N)))
        done += step

    phi = (n_kw + beta) / (n_k[:, None] + V * beta)
    theta = (n_dk + alpha) / (n_dk.sum(axis=1)[:, None] + K * alpha)
    return TopicModel(K, vocab, phi, theta, float(alpha), float(beta), seed, iterations, z)


def top_words(model: TopicModel, topic: int, n: int) -> list[tuple[float, str]]:
    """``n`` heaviest words of ``topic`` as ``(weight, token)`` pairs."""
    if not 0 <= topic < model.K:
        raise ValueError(f"topic {topic} out of range [0, {model.K})")
    if n < 0:
        raise ValueError("n must be non-negative")
    row = model.phi[topic]
    ranked = sorted(zip(row.tolist(), model.vocab), key=lambda p: (-p[0], p[1]))
    return ranked[:n]


def format_topic(model: TopicModel, topic: int, n: int = 10, digits: int = 3) -> str:
    """Render a topic as ``0.040*child+0.032*care+...``."""
    return "+".join(f"{w:.{digits}f}*{tok}" for w, tok in top_words(model, topic, n))
