"""Skip-gram word2vec and PV-DBOW doc2vec with negative sampling.

Training is single-threaded SGD driven by the SplitMix64 stream, so a seed
fixes every bit of the output.  No frequent-word subsampling, no minimum
count, symmetric fixed-radius windows.
"""
from dataclasses import dataclass

import numba
import numpy as np

from . import rng as _rng
from .errors import EmptyCorpus, InvalidConfig, MissingToken
from .matrix import FeatureMatrix

DEFAULT_WINDOW = {"w2v": 1, "d2v": 5}


@dataclass
class EmbedConfig:
    mode: str = "w2v"
    dim: int = 200
    window: int = None  # None -> 1 for w2v, 5 for d2v
    iterations: int = 100
    negatives: int = 5
    lr_start: float = 0.025
    lr_end: float = 0.0001
    seed: int = 1

    def __post_init__(self):
        if self.mode not in DEFAULT_WINDOW:
            raise InvalidConfig(f"embed mode must be w2v or d2v, got {self.mode!r}")
        if self.window is None:
            self.window = DEFAULT_WINDOW[self.mode]
        if self.dim < 1 or self.window < 1 or self.iterations < 1 or self.negatives < 1:
            raise InvalidConfig("dim, window, iterations and negatives must be >= 1")
        if not self.lr_start >= self.lr_end > 0:
            raise InvalidConfig("need lr_start >= lr_end > 0")


@dataclass
class WordVectors:
    vectors: np.ndarray
    vocab: dict


@dataclass
class DocVectors:
    vectors: np.ndarray
    doc_ids: list


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def sgns_loss(v, u_pos, u_negs):
    """Negative-sampling loss for one (input, positive, negatives) instance."""
    return float(-np.log(sigmoid(u_pos @ v)) - np.sum(np.log(sigmoid(-(u_negs @ v)))))


def sgns_gradients(v, u_pos, u_negs):
    """Analytic gradients of :func:`sgns_loss`.

    Returns ``(d_v, d_u_pos, d_u_negs)``; ``u_negs`` has one row per sample.
    """
    g_pos = sigmoid(u_pos @ v) - 1.0
    g_neg = sigmoid(u_negs @ v)
    d_v = g_pos * u_pos + g_neg @ u_negs
    return d_v, g_pos * v, np.outer(g_neg, v)


@numba.njit(cache=True)
def _sig(x):
    return 1.0 / (1.0 + np.exp(-x))


@numba.njit(cache=True)
def _draw(cdf, state):
    u = _rng.next_double(state) * cdf[-1]
    lo, hi = 0, cdf.shape[0] - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if cdf[mid] <= u:
            lo = mid + 1
        else:
            hi = mid
    return lo


@numba.njit(cache=True)
def _sgns_update(v, out, target, negatives, cdf, lr, state, work):
    """One positive plus ``negatives`` sampled updates; ``v`` updated in place."""
    dim = v.shape[0]
    for j in range(dim):
        work[j] = 0.0
    for s in range(negatives + 1):
        if s == 0:
            t = target
            label = 1.0
        else:
            t = _draw(cdf, state)
            if t == target:
                continue
            label = 0.0
        f = 0.0
        for j in range(dim):
            f += v[j] * out[t, j]
        g = (label - _sig(f)) * lr
        for j in range(dim):
            work[j] += g * out[t, j]
            out[t, j] += g * v[j]
    for j in range(dim):
        v[j] += work[j]


@numba.njit(cache=True)
def _train_w2v(words, starts, win, emb, out, cdf, epochs, negatives, lr0, lr1, state):
    n_docs = starts.shape[0] - 1
    total = 0
    for d in range(n_docs):
        L = starts[d + 1] - starts[d]
        for i in range(L):
            total += min(L - 1, i + win) - max(0, i - win)
    total *= epochs
    work = np.empty(emb.shape[1])
    step = 0
    for _ in range(epochs):
        for d in range(n_docs):
            a = starts[d]
            L = starts[d + 1] - a
            for i in range(L):
                center = words[a + i]
                for c in range(max(0, i - win), min(L - 1, i + win) + 1):
                    if c == i:
                        continue
                    lr = lr0 - (lr0 - lr1) * step / max(total - 1, 1)
                    _sgns_update(emb[center], out, words[a + c], negatives, cdf, lr, state, work)
                    step += 1


@numba.njit(cache=True)
def _train_dbow(words, starts, win, docvec, out, cdf, epochs, negatives, lr0, lr1, state):
    n_docs = starts.shape[0] - 1
    total = (starts[-1] - starts[0]) * epochs
    work = np.empty(docvec.shape[1])
    step = 0
    for _ in range(epochs):
        for d in range(n_docs):
            a = starts[d]
            L = starts[d + 1] - a
            for i in range(L):
                lo = max(0, i - win)
                hi = min(L - 1, i + win)
                target = words[a + lo + _rng.next_below(state, hi - lo + 1)]
                lr = lr0 - (lr0 - lr1) * step / max(total - 1, 1)
                _sgns_update(docvec[d], out, target, negatives, cdf, lr, state, work)
                step += 1


@numba.njit(cache=True)
def _init_uniform(table, state):
    dim = table.shape[1]
    for i in range(table.shape[0]):
        for j in range(dim):
            table[i, j] = (_rng.next_double(state) - 0.5) / dim


def _flatten(corpus):
    enc = corpus.encoded()
    starts = np.zeros(len(enc) + 1, dtype=np.int64)
    starts[1:] = np.cumsum([len(d) for d in enc])
    words = np.concatenate([np.asarray(d, dtype=np.int64) for d in enc])
    return words, starts


def noise_cdf(words, V):
    """Cumulative unigram^(3/4) distribution over the vocabulary."""
    counts = np.bincount(words, minlength=V).astype(np.float64)
    return np.cumsum(counts ** 0.75)


def _check(corpus, config, mode):
    if corpus.n == 0 or corpus.token_count == 0:
        raise EmptyCorpus("cannot train embeddings on an empty corpus")
    if config.mode != mode:
        raise InvalidConfig(f"config mode is {config.mode!r}, expected {mode!r}")


def train_word2vec(corpus, config):
    _check(corpus, config, "w2v")
    words, starts = _flatten(corpus)
    V = corpus.term_count
    state = _rng.make_state(config.seed)
    emb = np.empty((V, config.dim))
    _init_uniform(emb, state)
    out = np.zeros((V, config.dim))
    _train_w2v(words, starts, config.window, emb, out, noise_cdf(words, V),
               config.iterations, config.negatives, config.lr_start, config.lr_end, state)
    return WordVectors(emb, dict(corpus.vocab))


def word2vec_doc_features(corpus, wv):
    """Row i is the mean vector over the tokens of document i (repeats count)."""
    rows = np.empty((corpus.n, wv.vectors.shape[1]))
    for i, (doc_id, tokens) in enumerate(corpus.docs):
        try:
            idx = [wv.vocab[t] for t in tokens]
        except KeyError as exc:
            raise MissingToken(f"document {doc_id!r}: token {exc.args[0]!r} has no vector") from None
        rows[i] = wv.vectors[idx].mean(axis=0)
    return FeatureMatrix("embed", rows, corpus.ids)


def train_doc2vec(corpus, config):
    _check(corpus, config, "d2v")
    words, starts = _flatten(corpus)
    V = corpus.term_count
    state = _rng.make_state(config.seed)
    docvec = np.empty((corpus.n, config.dim))
    _init_uniform(docvec, state)
    out = np.zeros((V, config.dim))
    _train_dbow(words, starts, config.window, docvec, out, noise_cdf(words, V),
                config.iterations, config.negatives, config.lr_start, config.lr_end, state)
    return DocVectors(docvec, corpus.ids)


def embed_features(corpus, config):
    if config.mode == "w2v":
        return word2vec_doc_features(corpus, train_word2vec(corpus, config))
    dv = train_doc2vec(corpus, config)
    return FeatureMatrix("embed", dv.vectors, dv.doc_ids)


def sgns_step(v, out, target, negatives, lr, seed):
    """Python entry to one kernel update (copies inputs); used for checks."""
    v = np.array(v, dtype=np.float64)
    out = np.array(out, dtype=np.float64)
    cdf = np.arange(1, out.shape[0] + 1, dtype=np.float64)
    _sgns_update(v, out, int(target), int(negatives), cdf, float(lr),
                 _rng.make_state(seed), np.empty(v.shape[0]))
    return v, out
