"""k-means with random distinct-point initialization and an objective-change stop."""
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidConfig, NonFiniteFeature, TooFewPoints
from .rng import SplitMix64

log = logging.getLogger(__name__)


@dataclass
class KMeansConfig:
    k: int
    max_iter: int = 300
    epsilon: float = 1e-6
    seed: int = 1
    n_init: int = 1  # >1 keeps the lowest-E restart

    def __post_init__(self):
        if self.k < 1 or self.max_iter < 1 or self.epsilon < 0 or self.n_init < 1:
            raise InvalidConfig("need k >= 1, max_iter >= 1, epsilon >= 0, n_init >= 1")


@dataclass
class Clustering:
    labels: np.ndarray
    centers: np.ndarray
    objective_trace: list
    iterations_used: int
    reseeds: list = field(default_factory=list)  # iterations where an empty cluster was reseeded

    @property
    def objective(self):
        return self.objective_trace[-1]


def assign(X, centers):
    """Nearest center by squared Euclidean distance; ties go to the lowest id."""
    d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return np.argmin(d2, axis=1), d2


def update_centers(X, labels, k):
    centers = np.zeros((k, X.shape[1]))
    for j in range(k):
        members = X[labels == j]
        if len(members):
            centers[j] = members.sum(axis=0) / len(members)
    return centers


def objective(X, labels, centers):
    return float(((X - centers[labels]) ** 2).sum())


def _reseed_empty(X, labels, d2, k):
    """Move the point farthest from its own center into each empty cluster."""
    labels = labels.copy()
    empty = [j for j in range(k) if not np.any(labels == j)]
    own = d2[np.arange(len(labels)), labels].copy()
    for j in empty:
        counts = np.bincount(labels, minlength=k)
        # never empty a cluster by taking its last member
        own_masked = np.where(counts[labels] > 1, own, -1.0)
        i = int(np.argmax(own_masked))
        labels[i] = j
        own[i] = -1.0
    return labels, bool(empty)


def _single_run(X, config, seed):
    n = X.shape[0]
    k = config.k
    init = SplitMix64(seed).sample_without_replacement(n, k)
    centers = X[init].copy()
    labels, d2 = assign(X, centers)
    trace, reseeds = [], []
    it = 0
    for it in range(1, config.max_iter + 1):
        labels, moved = _reseed_empty(X, labels, d2, k)
        if moved:
            reseeds.append(it)
            log.info("k-means iteration %d: reseeded empty cluster", it)
        centers = update_centers(X, labels, k)
        trace.append(objective(X, labels, centers))
        new_labels, d2 = assign(X, centers)
        if np.array_equal(new_labels, labels):
            break
        if len(trace) >= 2 and abs(trace[-1] - trace[-2]) <= config.epsilon:
            break
        labels = new_labels
    return Clustering(labels, centers, trace, it, reseeds)


def kmeans(features, config):
    X = np.asarray(getattr(features, "matrix", features), dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < config.k:
        raise TooFewPoints(f"need at least k={config.k} points, got {X.shape[0]}")
    if not np.all(np.isfinite(X)):
        raise NonFiniteFeature("k-means input contains non-finite values")
    best = None
    for r in range(config.n_init):
        run = _single_run(X, config, config.seed + r)
        if best is None or run.objective < best.objective:
            best = run
    return best
