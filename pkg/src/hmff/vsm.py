"""TF-IDF vector space features."""
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import EmptyCorpus
from .matrix import FeatureMatrix


@dataclass
class TfIdfStats:
    n: int
    df: np.ndarray          # per vocab index
    counts: list            # per doc: Counter of vocab index -> n_i(d)
    lengths: np.ndarray     # t(d)


def tfidf_weight(token_count, doc_len, df, n):
    """(n_i(d) / t(d)) * ln(n / df_i)."""
    if token_count == 0:
        return 0.0
    return (token_count / doc_len) * math.log(n / df)


def tfidf_stats(corpus):
    if corpus.n == 0:
        raise EmptyCorpus("empty corpus")
    counts = [Counter(doc) for doc in corpus.encoded()]
    df = np.zeros(corpus.term_count, dtype=np.int64)
    for c in counts:
        for j in c:
            df[j] += 1
    lengths = np.array([sum(c.values()) for c in counts], dtype=np.int64)
    return TfIdfStats(corpus.n, df, counts, lengths)


def features_from_stats(stats, doc_ids):
    rows = np.zeros((stats.n, len(stats.df)))
    for i, c in enumerate(stats.counts):
        for j, cnt in c.items():
            rows[i, j] = tfidf_weight(cnt, stats.lengths[i], stats.df[j], stats.n)
    return FeatureMatrix("vsm", rows, list(doc_ids))


def vsm_features(corpus):
    """n x term_count TF-IDF matrix, columns in vocabulary order."""
    if corpus.n == 0:
        raise EmptyCorpus("empty corpus")
    enc = corpus.encoded()
    n, V = corpus.n, corpus.term_count
    tf = np.zeros((n, V))
    for i, doc in enumerate(enc):
        np.add.at(tf[i], doc, 1.0)
    df = np.count_nonzero(tf, axis=0)
    lengths = tf.sum(axis=1, keepdims=True)
    idf = np.log(n / df)
    return FeatureMatrix("vsm", tf / lengths * idf, corpus.ids)
