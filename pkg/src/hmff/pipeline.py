"""End-to-end HMFF pipeline with per-stage CSV caches and a run manifest.

Stage outputs in the output directory::

    corpus.tsv             preprocessed documents
    features_<src>.csv     per-source feature matrix
    topic_sweep.csv        (K, coherence) when the topic count is chosen automatically
    sim_<src>.csv          per-source similarity matrix
    fused.csv              HMFF feature matrix with provenance columns
    labels.csv, trace.csv  clustering of the first run
    runs.csv               per-run scores
    report.json            evaluation report
    manifest.json          config snapshot, stage keys, paths and wall times

A stage is reloaded instead of recomputed when ``manifest.json`` records the
same cache key for it and the file is still present.
"""
import dataclasses
import hashlib
import json
import logging
import statistics
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .cluster import KMeansConfig, kmeans
from .corpus import build_corpus, load_stopwords, read_corpus, read_documents, write_corpus
from .embed import EmbedConfig, embed_features
from .errors import ConfigError, DataError, HmffError
from .evaluation import align_truth, evaluate, read_truth, silhouette
from .fusion import fuse, read_fused, truncated_eig, write_fused
from .matrix import SOURCES, read_features, read_similarity, write_features, write_similarity
from .simmat import similarity_matrix
from .topic import LdaConfig, gibbs_train, select_topic_count, topic_features
from .vsm import vsm_features

log = logging.getLogger(__name__)


@dataclass
class PipelineConfig:
    input: str
    out: str
    format: str = "raw"               # raw | tokens
    sources: tuple = SOURCES
    embed: str = None                 # w2v | d2v; None -> w2v for tokens, d2v for raw
    topics: object = "auto"           # int or "auto"
    topic_grid: tuple = (2, 10, 1)    # lo, hi (inclusive), step
    eigen_k: int = 3
    clusters: int = None
    cluster_range: tuple = None       # lo, hi inclusive
    seed: int = 1
    runs: int = 1
    truth: str = None
    stopwords: str = None
    topic_iterations: int = 50
    embed_dim: int = 200
    embed_iterations: int = 100
    kmeans_max_iter: int = 300
    kmeans_restarts: int = 1          # k-means starts per fit, lowest E kept

    def __post_init__(self):
        self.sources = tuple(s for s in SOURCES if s in self.sources)
        if not self.sources:
            raise ConfigError("enable at least one of vsm, topic, embed")
        if self.format not in ("raw", "tokens"):
            raise ConfigError(f"format must be raw or tokens, got {self.format!r}")
        if self.embed is None:
            self.embed = "w2v" if self.format == "tokens" else "d2v"
        if self.embed not in ("w2v", "d2v"):
            raise ConfigError(f"embed must be w2v or d2v, got {self.embed!r}")
        if self.topics != "auto":
            self.topics = int(self.topics)
        self.topic_grid = tuple(int(x) for x in self.topic_grid)
        if self.clusters is not None and self.clusters < 1:
            raise ConfigError("cluster count must be >= 1")
        if self.cluster_range is not None:
            self.cluster_range = tuple(int(x) for x in self.cluster_range)
            lo, hi = self.cluster_range
            if lo < 2 or hi < lo:
                raise ConfigError("cluster range must satisfy 2 <= lo <= hi")
        if self.eigen_k < 1 or self.runs < 1 or self.kmeans_restarts < 1:
            raise ConfigError("eigen-k, runs and restarts must be >= 1")

    def topic_candidates(self):
        lo, hi, step = self.topic_grid
        if lo < 2 or hi < lo or step < 1:
            raise ConfigError("topic grid must satisfy 2 <= lo <= hi, step >= 1")
        return list(range(lo, hi + 1, step))

    def lda_config(self, K):
        return LdaConfig(K=K, iterations=self.topic_iterations, seed=self.seed)

    def embed_config(self):
        return EmbedConfig(mode=self.embed, dim=self.embed_dim,
                           iterations=self.embed_iterations, seed=self.seed)

    def kmeans_config(self, k, seed):
        return KMeansConfig(k=k, max_iter=self.kmeans_max_iter, seed=seed, n_init=self.kmeans_restarts)

    def snapshot(self):
        d = dataclasses.asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}


class StageError(HmffError):
    """Wraps a failure with the stage that raised it."""

    def __init__(self, stage, cause):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 1)


def _digest(*parts):
    h = hashlib.sha256()
    for p in parts:
        h.update(json.dumps(p, sort_keys=True, default=str).encode())
        h.update(b"\0")
    return h.hexdigest()[:16]


def _file_digest(path):
    path = Path(path)
    if not path.exists():
        raise DataError(f"input not found: {path}")
    h = hashlib.sha256()
    if path.is_dir():
        for p in sorted(path.iterdir()):
            if p.is_file():
                h.update(p.name.encode())
                h.update(p.read_bytes())
    else:
        h.update(path.read_bytes())
    return h.hexdigest()[:16]


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(repr(x) if isinstance(x, float) else str(x) for x in row) + "\n")


class Pipeline:
    """Cached stage runner for one :class:`PipelineConfig`."""

    def __init__(self, config):
        self.config = config
        self.out = Path(config.out)
        self.out.mkdir(parents=True, exist_ok=True)
        self.manifest_path = self.out / "manifest.json"
        self.previous = {}
        if self.manifest_path.exists():
            try:
                self.previous = json.loads(self.manifest_path.read_text()).get("stages", {})
            except (json.JSONDecodeError, OSError):
                self.previous = {}
        self.stages = {}
        self._memo = {}

    # -- cache plumbing -------------------------------------------------
    def _stage(self, name, key, paths, compute, load):
        if name in self._memo:
            return self._memo[name]
        t0 = time.perf_counter()
        prev = self.previous.get(name)
        cached = (prev is not None and prev.get("key") == key
                  and all((self.out / p).exists() for p in paths))
        try:
            value = load() if cached else compute()
        except HmffError as exc:
            raise StageError(name, exc) from exc
        self.stages[name] = {"key": key, "paths": list(paths), "cached": cached,
                             "seconds": round(time.perf_counter() - t0, 6)}
        self._memo[name] = (value, key)
        self.write_manifest()
        return value, key

    def write_manifest(self):
        manifest = {"tool": "hmff", "version": __version__,
                    "config": self.config.snapshot(), "stages": self.stages}
        self.manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")

    # -- stages ---------------------------------------------------------
    def corpus(self):
        c = self.config
        stop_key = _file_digest(c.stopwords) if c.stopwords else "bundled"
        key = _digest("corpus", _file_digest(c.input), c.format, stop_key)
        path = self.out / "corpus.tsv"

        def compute():
            docs = read_documents(c.input)
            stops = load_stopwords(c.stopwords) if c.format == "raw" else frozenset()
            corpus = build_corpus(docs, stops, pre_tokenized=c.format == "tokens")
            write_corpus(corpus, path)
            return corpus

        return self._stage("corpus", key, ["corpus.tsv"], compute, lambda: read_corpus(path))

    def topic_count(self):
        c = self.config
        corpus, ckey = self.corpus()
        if c.topics != "auto":
            return c.topics, _digest("topics", c.topics)
        key = _digest("topic_sweep", ckey, c.topic_grid, c.topic_iterations, c.seed)
        path = self.out / "topic_sweep.csv"

        def compute():
            best, scores = select_topic_count(corpus, c.topic_candidates(), c.lda_config(2))
            write_sweep(path, "K", "coherence", scores, best)
            return best

        def load():
            return read_sweep_choice(path)

        return self._stage("topic_sweep", key, ["topic_sweep.csv"], compute, load)

    def features(self, source):
        c = self.config
        corpus, ckey = self.corpus()
        if source == "vsm":
            params = ()
        elif source == "topic":
            K, tkey = self.topic_count()
            params = (tkey, c.topic_iterations, c.seed)
        else:
            params = dataclasses.asdict(c.embed_config())
        key = _digest("features", source, ckey, params)
        name = f"features_{source}.csv"
        path = self.out / name

        def compute():
            if source == "vsm":
                fm = vsm_features(corpus)
            elif source == "topic":
                fm = topic_features(gibbs_train(corpus, c.lda_config(K)))
            else:
                fm = embed_features(corpus, c.embed_config())
            write_features(fm, path)
            return fm

        return self._stage(f"features_{source}", key, [name], compute, lambda: read_features(path))

    def similarity(self, source):
        fm, fkey = self.features(source)
        key = _digest("similarity", fkey)
        name = f"sim_{source}.csv"
        path = self.out / name

        def compute():
            sim = similarity_matrix(fm)
            write_similarity(sim, path)
            return sim

        return self._stage(f"sim_{source}", key, [name], compute, lambda: read_similarity(path))

    def fused(self):
        c = self.config
        sims = {s: self.similarity(s) for s in c.sources}
        key = _digest("fused", [sims[s][1] for s in c.sources], c.eigen_k)
        path = self.out / "fused.csv"

        def compute():
            eigs = {s: truncated_eig(sim, c.eigen_k) for s, (sim, _) in sims.items()}
            doc_ids = sims[c.sources[0]][0].doc_ids
            ff = fuse(eigs, doc_ids)
            write_fused(ff, path)
            return ff

        return self._stage("fused", key, ["fused.csv"], compute, lambda: read_fused(path))

    def truth(self):
        if not self.config.truth:
            return None
        ff, _ = self.fused()
        return align_truth(ff.doc_ids, read_truth(self.config.truth))

    def cluster_and_evaluate(self):
        c = self.config
        if c.clusters is None:
            raise ConfigError("--clusters is required to cluster")
        ff, _ = self.fused()
        try:
            truth = self.truth()
        except HmffError as exc:
            raise StageError("truth", exc) from exc
        t0 = time.perf_counter()
        results = []
        first = None
        try:
            for r in range(c.runs):
                cl = kmeans(ff.matrix, c.kmeans_config(c.clusters, c.seed + r))
                results.append(evaluate(ff.matrix, cl.labels, truth))
                if first is None:
                    first = cl
        except HmffError as exc:
            raise StageError("cluster", exc) from exc
        write_clustering(first, ff.doc_ids, self.out)
        report = aggregate_reports(results, c.runs)
        write_runs(self.out / "runs.csv", c.seed, results)
        (self.out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        self.stages["cluster"] = {"key": None, "cached": False,
                                  "paths": ["labels.csv", "trace.csv", "runs.csv", "report.json"],
                                  "seconds": round(time.perf_counter() - t0, 6)}
        self.write_manifest()
        return ff, first, report


def aggregate_reports(reports, runs):
    first = reports[0].as_dict()
    if runs == 1:
        return _jsonable(first)
    out = {"runs": runs, "per_run": [_jsonable(r.as_dict()) for r in reports]}
    for metric in ("silhouette", "accuracy", "f_measure"):
        vals = [getattr(r, metric) for r in reports]
        vals = [v for v in vals if v is not None]
        if not vals:
            continue
        out[metric] = statistics.fmean(vals)
        out[f"{metric}_std"] = statistics.stdev(vals) if len(vals) > 1 else 0.0
    if "accuracy_definition" in first:
        out["accuracy_definition"] = first["accuracy_definition"]
    return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def write_clustering(cl, doc_ids, out):
    out = Path(out)
    _write_csv(out / "labels.csv", ["doc_id", "cluster"], zip(doc_ids, cl.labels.tolist()))
    _write_csv(out / "trace.csv", ["iter", "E"], enumerate(cl.objective_trace, 1))


def read_labels(path):
    ids, labels = [], []
    with open(path, encoding="utf-8") as fh:
        next(fh)
        for line in fh:
            doc_id, lab = line.rstrip("\n").split(",")
            ids.append(doc_id)
            labels.append(int(lab))
    return ids, np.array(labels)


def write_runs(path, seed, reports):
    rows = []
    for r, rep in enumerate(reports):
        rows.append([r, seed + r, "" if rep.silhouette is None else rep.silhouette,
                     "" if rep.accuracy is None else rep.accuracy,
                     "" if rep.f_measure is None else rep.f_measure])
    _write_csv(path, ["run", "seed", "silhouette", "accuracy", "f_measure"], rows)


def write_sweep(path, name, score_name, scores, best):
    rows = [[k, float(v), int(k == best)] for k, v in sorted(scores.items())]
    _write_csv(path, [name, score_name, "best"], rows)


def read_sweep_choice(path):
    with open(path, encoding="utf-8") as fh:
        next(fh)
        for line in fh:
            k, _, best = line.rstrip("\n").split(",")
            if best == "1":
                return int(k)
    raise DataError(f"{path}: no row marked best")


def config_from_manifest(path):
    """Rebuild the :class:`PipelineConfig` recorded in a ``manifest.json``."""
    try:
        snap = json.loads(Path(path).read_text(encoding="utf-8"))["config"]
    except (OSError, ValueError, KeyError) as exc:
        raise DataError(f"{path}: unreadable manifest ({exc})") from None
    fields = {f.name for f in dataclasses.fields(PipelineConfig)}
    return PipelineConfig(**{k: v for k, v in snap.items() if k in fields})


def run_pipeline(config):
    """Run every stage; returns ``(FusedFeatures, Clustering, report dict)``."""
    return Pipeline(config).cluster_and_evaluate()


def sweep_topics(config):
    """Coherence sweep over the config's topic grid; writes topic_sweep.csv."""
    p = Pipeline(dataclasses.replace(config, topics="auto"))
    corpus, _ = p.corpus()
    best, scores = select_topic_count(corpus, config.topic_candidates(), config.lda_config(2))
    write_sweep(p.out / "topic_sweep.csv", "K", "coherence", scores, best)
    return best, scores


def sweep_clusters(config, cluster_range=None, features=None):
    """One k-means + silhouette per cluster count; writes cluster_sweep.csv."""
    lo, hi = cluster_range or config.cluster_range or (4, 10)
    p = Pipeline(config)
    if features is None:
        features, _ = p.fused()
    scores = {}
    for k in range(lo, hi + 1):
        cl = kmeans(features.matrix, config.kmeans_config(k, config.seed))
        try:
            scores[k] = silhouette(features.matrix, cl.labels)
        except HmffError:
            scores[k] = float("nan")
    valid = {k: v for k, v in scores.items() if v == v}
    best = max(sorted(valid), key=lambda k: valid[k]) if valid else lo
    write_sweep(p.out / "cluster_sweep.csv", "k_clusters", "silhouette", scores, best)
    return best, scores
