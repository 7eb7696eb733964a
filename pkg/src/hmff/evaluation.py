"""Cluster quality: silhouette (internal), F-measure and purity accuracy (external)."""
import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, EmptyInput, SingleCluster
from .simmat import distance_matrix


@dataclass
class EvalReport:
    silhouette: float
    accuracy: float = None
    f_measure: float = None
    clusters: list = field(default_factory=list)

    def as_dict(self):
        out = {"silhouette": self.silhouette}
        if self.accuracy is not None:
            out["accuracy"] = self.accuracy
            out["f_measure"] = self.f_measure
            out["accuracy_definition"] = "purity: (1/n) * sum over clusters of the majority-class count"
            out["clusters"] = self.clusters
        return out


def pairwise_distances(X):
    return distance_matrix(np.asarray(X, dtype=np.float64).reshape(len(X), -1))


def silhouette_samples(X, labels):
    labels = np.asarray(labels)
    ids = np.unique(labels)
    if len(ids) < 2:
        raise SingleCluster("silhouette needs at least two clusters")
    D = pairwise_distances(X)
    masks = [labels == c for c in ids]
    sizes = np.array([m.sum() for m in masks])
    sums = np.stack([D[:, m].sum(axis=1) for m in masks], axis=1)
    pos = np.searchsorted(ids, labels)
    own_size = sizes[pos]
    rows = np.arange(len(labels))
    a = np.where(own_size > 1, sums[rows, pos] / np.maximum(own_size - 1, 1), 0.0)
    others = sums / sizes
    others[rows, pos] = np.inf
    b = others.min(axis=1)
    denom = np.maximum(a, b)
    s = np.where((own_size > 1) & (denom > 0), (b - a) / np.where(denom > 0, denom, 1.0), 0.0)
    return s


def silhouette(X, labels):
    return float(np.mean(silhouette_samples(X, labels)))


def contingency(labels, truth):
    """Cluster x class count matrix plus the row/column label values."""
    labels = list(labels)
    truth = list(truth)
    if not labels or len(labels) != len(truth):
        raise EmptyInput("labels and truth must be non-empty and equal length")
    rs = sorted(set(labels), key=str)
    cs = sorted(set(truth), key=str)
    ri = {r: i for i, r in enumerate(rs)}
    ci = {c: i for i, c in enumerate(cs)}
    M = np.zeros((len(rs), len(cs)), dtype=np.int64)
    for r, c in zip(labels, truth):
        M[ri[r], ci[c]] += 1
    return M, rs, cs


def _f_table(M):
    n_r = M.sum(axis=1, keepdims=True)
    n_s = M.sum(axis=0, keepdims=True)
    P = M / n_r
    R = M / n_s
    with np.errstate(invalid="ignore", divide="ignore"):
        F = np.where(M > 0, 2 * R * P / (R + P), 0.0)
    return P, R, F


def f_measure(labels, truth):
    M, _, _ = contingency(labels, truth)
    _, _, F = _f_table(M)
    n = M.sum()
    return float((M.sum(axis=1) / n * F.max(axis=1)).sum())


def accuracy(labels, truth):
    """Purity: each cluster is credited with its majority class."""
    M, _, _ = contingency(labels, truth)
    return float(M.max(axis=1).sum() / M.sum())


def cluster_diagnostics(labels, truth):
    M, rs, cs = contingency(labels, truth)
    P, R, F = _f_table(M)
    out = []
    for i, r in enumerate(rs):
        j = int(np.argmax(F[i]))
        out.append({"cluster": r, "n_r": int(M[i].sum()), "best_class": cs[j],
                    "precision": float(P[i, j]), "recall": float(R[i, j]), "f": float(F[i, j])})
    return out


def evaluate(X, labels, truth=None):
    """Silhouette always (None if only one cluster is populated); accuracy and
    F-measure only when ``truth`` is given."""
    sil = silhouette(X, labels) if len(np.unique(labels)) > 1 else None
    report = EvalReport(sil)
    if truth is not None:
        report.accuracy = accuracy(labels, truth)
        report.f_measure = f_measure(labels, truth)
        report.clusters = cluster_diagnostics(labels, truth)
    return report


def read_truth(path):
    """``doc_id,class`` CSV (an optional header row starting ``doc_id`` is skipped)."""
    truth = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0] == "doc_id":
                continue
            if len(row) < 2:
                raise DataError(f"{path}: malformed truth row {row!r}")
            truth[row[0].strip()] = row[1].strip()
    return truth


def align_truth(doc_ids, truth):
    try:
        return [truth[d] for d in doc_ids]
    except KeyError as exc:
        raise DataError(f"ground truth has no class for document {exc.args[0]!r}") from None
