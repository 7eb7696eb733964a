"""Independent brute-force reference implementations used as test oracles.

Deliberately scalar and loop-based; nothing here imports package numerics.
"""
import math

import numpy as np

from hmff.corpus import make_corpus


def random_token_corpus(rng, max_docs=12, vocab=15, max_len=10):
    n = int(rng.integers(2, max_docs + 1))
    docs = []
    for i in range(n):
        length = int(rng.integers(1, max_len + 1))
        docs.append((f"d{i}", [f"t{int(w)}" for w in rng.integers(0, vocab, size=length)]))
    return make_corpus(docs)


def tfidf_oracle(encoded, V):
    n = len(encoded)
    out = [[0.0] * V for _ in range(n)]
    for j in range(V):
        df = sum(1 for doc in encoded if j in doc)
        for i, doc in enumerate(encoded):
            c = doc.count(j)
            if c:
                out[i][j] = (c / len(doc)) * math.log(n / df)
    return np.array(out)


def kl2(p, q):
    return sum(a * math.log2(a / b) for a, b in zip(p, q) if a > 0)


def js_oracle(p, q):
    m = [(a + b) / 2 for a, b in zip(p, q)]
    return 0.5 * kl2(p, m) + 0.5 * kl2(q, m)


def dist(x, y):
    return math.sqrt(sum((a - b) ** 2 for a, b in zip(x, y)))


def silhouette_oracle(X, labels):
    X = [list(map(float, row)) for row in X]
    labels = list(labels)
    n = len(X)
    total = 0.0
    for i in range(n):
        own = [j for j in range(n) if labels[j] == labels[i] and j != i]
        if not own:
            continue  # singleton contributes 0
        a = sum(dist(X[i], X[j]) for j in own) / len(own)
        b = math.inf
        for c in set(labels):
            if c == labels[i]:
                continue
            members = [j for j in range(n) if labels[j] == c]
            b = min(b, sum(dist(X[i], X[j]) for j in members) / len(members))
        if max(a, b) > 0:
            total += (b - a) / max(a, b)
    return total / n


def f_measure_oracle(labels, truth):
    n = len(labels)
    total = 0.0
    for r in set(labels):
        in_r = [i for i in range(n) if labels[i] == r]
        best = 0.0
        for s in set(truth):
            in_s = [i for i in range(n) if truth[i] == s]
            n_rs = sum(1 for i in in_r if truth[i] == s)
            if n_rs == 0:
                continue
            p = n_rs / len(in_r)
            rec = n_rs / len(in_s)
            best = max(best, 2 * p * rec / (p + rec))
        total += len(in_r) / n * best
    return total


def purity_oracle(labels, truth):
    n = len(labels)
    hits = 0
    for r in set(labels):
        cls = [truth[i] for i in range(n) if labels[i] == r]
        hits += max(cls.count(s) for s in set(cls))
    return hits / n


def jacobi_oracle(A, tol=1e-14, max_rot=100000):
    """Classical Jacobi (largest off-diagonal pivot) on a plain-list copy.

    Returns eigenvalues descending and matching unit eigenvector columns.
    """
    n = len(A)
    a = [list(map(float, row)) for row in A]
    v = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    for _ in range(max_rot):
        p, q, big = 0, 1, 0.0
        for i in range(n):
            for j in range(i + 1, n):
                if abs(a[i][j]) > big:
                    p, q, big = i, j, abs(a[i][j])
        if n < 2 or big < tol:
            break
        theta = 0.5 * math.atan2(2 * a[p][q], a[q][q] - a[p][p])
        c, s = math.cos(theta), math.sin(theta)
        for k in range(n):
            akp, akq = a[k][p], a[k][q]
            a[k][p] = c * akp - s * akq
            a[k][q] = s * akp + c * akq
        for k in range(n):
            apk, aqk = a[p][k], a[q][k]
            a[p][k] = c * apk - s * aqk
            a[q][k] = s * apk + c * aqk
        for k in range(n):
            vkp, vkq = v[k][p], v[k][q]
            v[k][p] = c * vkp - s * vkq
            v[k][q] = s * vkp + c * vkq
    vals = np.array([a[i][i] for i in range(n)])
    vecs = np.array(v)
    order = np.argsort(-vals, kind="stable")
    return vals[order], vecs[:, order]


def align_signs(vectors):
    """Largest-magnitude entry of each column made non-negative (first on ties)."""
    out = np.array(vectors, dtype=float)
    for j in range(out.shape[1]):
        col = list(out[:, j])
        i = max(range(len(col)), key=lambda t: (abs(col[t]), -t))
        if col[i] < 0:
            out[:, j] = -out[:, j]
    return out
