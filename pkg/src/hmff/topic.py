"""LDA by collapsed Gibbs sampling, UMass coherence and topic-count selection."""
import dataclasses
import logging
import math
from dataclasses import dataclass, field

import numba
import numpy as np

from . import rng as _rng
from .errors import EmptyCorpus, InvalidConfig, WordWithZeroDf
from .matrix import FeatureMatrix

log = logging.getLogger(__name__)


@dataclass
class LdaConfig:
    K: int
    alpha: float = None  # None -> 1/K
    beta: float = 0.01
    iterations: int = 50
    seed: int = 1

    def __post_init__(self):
        if self.K < 2:
            raise InvalidConfig(f"K must be >= 2, got {self.K}")
        if not (self.doc_prior > 0 and self.beta > 0):
            raise InvalidConfig("alpha and beta must be positive")
        if self.iterations < 1:
            raise InvalidConfig("iterations must be >= 1")

    @property
    def doc_prior(self):
        return 1.0 / self.K if self.alpha is None else float(self.alpha)


@dataclass
class LdaState:
    doc_of: np.ndarray      # token position -> document index
    words: np.ndarray       # token position -> vocab index
    z: np.ndarray           # token position -> topic
    doc_topic: np.ndarray   # n x K
    topic_word: np.ndarray  # K x V
    topic_total: np.ndarray  # K


@dataclass
class TopicModel:
    theta: np.ndarray
    phi: np.ndarray
    config: LdaConfig
    doc_ids: list = field(default_factory=list)


@numba.njit(cache=True)
def _init_assignments(doc_of, words, z, doc_topic, topic_word, topic_total, K, state):
    for t in range(words.shape[0]):
        k = _rng.next_below(state, K)
        z[t] = k
        doc_topic[doc_of[t], k] += 1
        topic_word[k, words[t]] += 1
        topic_total[k] += 1


@numba.njit(cache=True)
def _sweep(doc_of, words, z, doc_topic, topic_word, topic_total, alpha, beta, state):
    K = topic_total.shape[0]
    V = topic_word.shape[1]
    vbeta = V * beta
    p = np.empty(K)
    for t in range(words.shape[0]):
        d = doc_of[t]
        w = words[t]
        k = z[t]
        doc_topic[d, k] -= 1
        topic_word[k, w] -= 1
        topic_total[k] -= 1
        acc = 0.0
        for j in range(K):
            acc += (doc_topic[d, j] + alpha) * (topic_word[j, w] + beta) / (topic_total[j] + vbeta)
            p[j] = acc
        u = _rng.next_double(state) * acc
        k = 0
        while k < K - 1 and p[k] <= u:
            k += 1
        z[t] = k
        doc_topic[d, k] += 1
        topic_word[k, w] += 1
        topic_total[k] += 1


def init_state(corpus, config, state):
    enc = corpus.encoded()
    doc_of = np.concatenate([np.full(len(d), i, dtype=np.int64) for i, d in enumerate(enc)])
    words = np.concatenate([np.asarray(d, dtype=np.int64) for d in enc])
    K, V = config.K, corpus.term_count
    st = LdaState(doc_of, words, np.zeros(len(words), dtype=np.int64),
                  np.zeros((corpus.n, K), dtype=np.int64),
                  np.zeros((K, V), dtype=np.int64), np.zeros(K, dtype=np.int64))
    _init_assignments(st.doc_of, st.words, st.z, st.doc_topic, st.topic_word, st.topic_total, K, state)
    return st


def sweep(st, config, state):
    _sweep(st.doc_of, st.words, st.z, st.doc_topic, st.topic_word, st.topic_total,
           float(config.doc_prior), float(config.beta), state)


def estimate(st, config):
    """Smoothed theta and phi from the current counts."""
    K, V = config.K, st.topic_word.shape[1]
    lens = st.doc_topic.sum(axis=1, keepdims=True)
    theta = (st.doc_topic + config.doc_prior) / (lens + K * config.doc_prior)
    phi = (st.topic_word + config.beta) / (st.topic_total[:, None] + V * config.beta)
    return theta, phi


def gibbs_train(corpus, config, on_sweep=None):
    """Train LDA; ``on_sweep(i, state)`` is called after every sweep if given."""
    if corpus.n == 0 or corpus.token_count == 0:
        raise EmptyCorpus("cannot train LDA on an empty corpus")
    if corpus.term_count < config.K:
        log.warning("vocabulary (%d) smaller than topic count (%d)", corpus.term_count, config.K)
    state = _rng.make_state(config.seed)
    st = init_state(corpus, config, state)
    for i in range(config.iterations):
        sweep(st, config, state)
        if on_sweep is not None:
            on_sweep(i, st)
    theta, phi = estimate(st, config)
    return TopicModel(theta, phi, config, corpus.ids)


def top_words(phi_row, top_n):
    """Indices of the ``top_n`` largest entries, descending; ties by lower index."""
    return np.argsort(-phi_row, kind="stable")[:top_n]


def document_sets(corpus):
    """vocab index -> set of document indices containing it."""
    sets = [set() for _ in range(corpus.term_count)]
    for i, doc in enumerate(corpus.encoded()):
        for w in doc:
            sets[w].add(i)
    return sets


def topic_coherence(words, doc_sets):
    """UMass score of one ordered top-word list (+1 smoothed co-document counts)."""
    N = len(words)
    total = 0.0
    for i in range(1, N):
        for j in range(i):
            dj = len(doc_sets[words[j]])
            if dj == 0:
                raise WordWithZeroDf(f"word index {words[j]} occurs in no document")
            dij = len(doc_sets[words[i]] & doc_sets[words[j]])
            total += math.log((dij + 1) / dj)
    return 2.0 * total / (N * (N - 1))


def umass_coherence(model, corpus, top_n=10, doc_sets=None):
    """Mean UMass coherence over the model's topics."""
    if top_n < 2:
        raise InvalidConfig("top_n must be >= 2")
    if doc_sets is None:
        doc_sets = document_sets(corpus)
    top_n = min(top_n, model.phi.shape[1])
    scores = [topic_coherence(top_words(row, top_n), doc_sets) for row in model.phi]
    return float(np.mean(scores))


def select_topic_count(corpus, candidates, base_config=None, top_n=10):
    """Train one model per candidate K and return ``(best_K, {K: score})``.

    Every candidate uses the base seed; ties go to the smaller K.
    """
    candidates = list(candidates)
    if not candidates:
        raise InvalidConfig("no topic-count candidates")
    base = base_config or LdaConfig(K=2)
    doc_sets = document_sets(corpus)
    scores = {}
    for K in candidates:
        cfg = dataclasses.replace(base, K=K)
        model = gibbs_train(corpus, cfg)
        scores[K] = umass_coherence(model, corpus, top_n, doc_sets)
        log.info("K=%d coherence=%.6f", K, scores[K])
    best = max(sorted(scores), key=lambda k: (scores[k], -k))
    return best, scores


def topic_features(model):
    return FeatureMatrix("topic", model.theta.copy(), list(model.doc_ids))
