"""Mutual document-similarity matrices.

Cosine-Euclidean (CE) serves VSM and embedding features; one minus the
base-2 Jensen-Shannon divergence serves topic distributions.  Every output
is exactly symmetric with a unit diagonal and entries in [0, 1].
"""
import math

import numpy as np

from .errors import InvalidConfig, NotADistribution, SingleDocument
from .matrix import SimilarityMatrix


def cosine(u, v):
    """Cosine of two vectors; a zero vector has cosine 0 to anything else."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(u @ v / (nu * nv))


def euclidean(u, v):
    d = np.asarray(u, dtype=np.float64) - np.asarray(v, dtype=np.float64)
    return float(math.sqrt(d @ d))


def minmax_scale_euclidean(dist):
    """Min-max scale ``1 - Euc`` over all ordered pairs, diagonal included.

    ``dist`` is the full n x n distance matrix.  When every distance is zero
    all pairs scale to 1.
    """
    dist = np.asarray(dist, dtype=np.float64)
    if dist.shape[0] < 2:
        raise SingleDocument("need at least two documents to scale distances")
    x = 1.0 - dist
    lo, hi = x.min(), x.max()
    if hi == lo:
        return np.ones_like(x)
    return (x - lo) / (hi - lo)


def _symmetrize(m):
    upper = np.triu(m, 1)
    out = upper + upper.T
    np.fill_diagonal(out, 1.0)
    return np.clip(out, 0.0, 1.0)


def cosine_matrix(rows):
    """Pairwise cosine with negatives clamped to 0 and self-pairs set to 1."""
    rows = np.asarray(rows, dtype=np.float64)
    norms = np.linalg.norm(rows, axis=1)
    safe = np.where(norms == 0.0, 1.0, norms)
    unit = rows / safe[:, None]
    cos = unit @ unit.T
    cos[norms == 0.0, :] = 0.0
    cos[:, norms == 0.0] = 0.0
    return _symmetrize(cos)


def distance_matrix(rows):
    rows = np.asarray(rows, dtype=np.float64)
    n = rows.shape[0]
    d = np.zeros((n, n))
    # row loop keeps memory at O(n * dim) and exact zeros for equal rows
    for i in range(n - 1):
        diff = rows[i + 1:] - rows[i]
        d[i, i + 1:] = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    return d + d.T


def ce_similarity_matrix(features):
    if features.source not in ("vsm", "embed"):
        raise InvalidConfig(f"CE similarity applies to vsm/embed, not {features.source!r}")
    if features.n < 2:
        raise SingleDocument("need at least two documents")
    cos = cosine_matrix(features.rows)
    euc = minmax_scale_euclidean(distance_matrix(features.rows))
    return SimilarityMatrix(features.source, "CE", _symmetrize((cos + euc) / 2.0), list(features.doc_ids))


def js_divergence(p, q):
    """Base-2 Jensen-Shannon divergence, in [0, 1]."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    m = (p + q) / 2.0
    return 0.5 * _kl2(p, m) + 0.5 * _kl2(q, m)


def _kl2(p, m):
    mask = p > 0
    return float(np.sum(p[mask] * np.log2(p[mask] / m[mask])))


def check_distributions(rows, tol=1e-6):
    rows = np.asarray(rows, dtype=np.float64)
    if np.any(rows < 0):
        raise NotADistribution("negative probability")
    bad = np.abs(rows.sum(axis=1) - 1.0) > tol
    if np.any(bad):
        raise NotADistribution(f"row {int(np.argmax(bad))} does not sum to 1")


def js_similarity_matrix(features):
    if features.source != "topic":
        raise InvalidConfig(f"JS similarity applies to topic features, not {features.source!r}")
    rows = features.rows
    check_distributions(rows)
    n = rows.shape[0]
    sim = np.zeros((n, n))
    for i in range(n):
        p = rows[i]
        q = rows[i + 1:]
        m = (p + q) / 2.0
        with np.errstate(divide="ignore", invalid="ignore"):
            kp = np.where(p > 0, p * np.log2(p / m), 0.0).sum(axis=1)
            kq = np.where(q > 0, q * np.log2(q / m), 0.0).sum(axis=1)
        sim[i, i + 1:] = 1.0 - (0.5 * kp + 0.5 * kq)
    return SimilarityMatrix("topic", "JS", _symmetrize(sim), list(features.doc_ids))


def similarity_matrix(features):
    """Dispatch on source: JS for topic, CE otherwise."""
    if features.source == "topic":
        return js_similarity_matrix(features)
    return ce_similarity_matrix(features)
