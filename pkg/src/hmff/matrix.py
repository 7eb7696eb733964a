"""Shared matrix containers and the stage-cache CSV format.

Every cache file starts with one typed header line::

    #hmff kind=feature source=vsm n=2 dim=3

followed by a column-name row and one row per document.  Floats are written
with ``repr`` so a reload reproduces every bit.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, DimensionMismatch, NonFiniteFeature

SOURCES = ("vsm", "topic", "embed")


@dataclass
class FeatureMatrix:
    source: str
    rows: np.ndarray
    doc_ids: list

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.float64)
        if self.rows.ndim != 2 or self.rows.shape[0] != len(self.doc_ids):
            raise DimensionMismatch(
                f"{self.source}: {self.rows.shape} rows for {len(self.doc_ids)} documents"
            )
        if not np.all(np.isfinite(self.rows)):
            raise NonFiniteFeature(f"{self.source}: non-finite feature value")

    @property
    def n(self):
        return self.rows.shape[0]

    @property
    def dim(self):
        return self.rows.shape[1]


@dataclass
class SimilarityMatrix:
    source: str
    measure: str  # "CE" or "JS"
    values: np.ndarray
    doc_ids: list = field(default_factory=list)

    @property
    def n(self):
        return self.values.shape[0]


def _fmt(x):
    return repr(float(x))


def write_table(path, header, columns, doc_ids, values):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("#hmff " + " ".join(f"{k}={v}" for k, v in header.items()) + "\n")
        fh.write(",".join(["doc_id", *columns]) + "\n")
        for doc_id, row in zip(doc_ids, values):
            fh.write(",".join([str(doc_id), *map(_fmt, row)]) + "\n")


def read_table(path):
    """Return ``(header dict, column names, doc ids, float array)``."""
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        if not first.startswith("#hmff "):
            raise DataError(f"{path}: missing #hmff header")
        header = dict(item.split("=", 1) for item in first[6:].split())
        columns = fh.readline().rstrip("\n").split(",")[1:]
        ids, rows = [], []
        for line in fh:
            parts = line.rstrip("\n").split(",")
            ids.append(parts[0])
            rows.append([float(x) for x in parts[1:]])
    values = np.array(rows, dtype=np.float64).reshape(len(ids), len(columns))
    return header, columns, ids, values


def write_features(fm, path):
    write_table(path, {"kind": "feature", "source": fm.source, "n": fm.n, "dim": fm.dim},
                [f"f{j}" for j in range(fm.dim)], fm.doc_ids, fm.rows)


def read_features(path):
    header, _, ids, values = read_table(path)
    if header.get("kind") != "feature":
        raise DataError(f"{path}: not a feature matrix")
    return FeatureMatrix(header["source"], values, ids)


def write_similarity(sim, path):
    write_table(path, {"kind": "similarity", "source": sim.source, "measure": sim.measure, "n": sim.n},
                list(sim.doc_ids), sim.doc_ids, sim.values)


def read_similarity(path):
    header, _, ids, values = read_table(path)
    if header.get("kind") != "similarity":
        raise DataError(f"{path}: not a similarity matrix")
    return SimilarityMatrix(header["source"], header["measure"], values, ids)
