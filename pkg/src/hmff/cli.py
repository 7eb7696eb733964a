"""Command-line entry point: ``hmff <subcommand> [flags]``.

Exit codes: 0 success, 2 config error, 3 data error, 4 numeric failure.
"""
import argparse
import json
import logging
import sys
from pathlib import Path

from .cluster import KMeansConfig, kmeans
from .corpus import build_corpus, load_stopwords, read_documents, write_corpus
from .errors import ConfigError, DataError, HmffError, NumericError
from .evaluation import align_truth, evaluate, read_truth
from .fusion import fuse, read_fused, truncated_eig, write_fused
from .matrix import SOURCES, read_features, read_similarity, write_similarity
from .pipeline import (Pipeline, PipelineConfig, aggregate_reports, read_labels,
                       sweep_clusters, sweep_topics, write_clustering)
from .simmat import similarity_matrix

log = logging.getLogger("hmff")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _range(text, parts):
    try:
        vals = [int(x) for x in text.split(":")]
    except ValueError:
        raise ConfigError(f"bad range {text!r}") from None
    if len(vals) == 2 and parts == 3:
        vals.append(1)
    if len(vals) != parts:
        raise ConfigError(f"bad range {text!r}")
    return tuple(vals)


def build_parser():
    p = _Parser(prog="hmff", description="Hybrid multisource feature fusion text clustering")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, input_required=False):
        sp.add_argument("--input", required=input_required,
                        help="input file/directory, or a previous stage's output directory")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--seed", type=int, default=1)

    def corpus_flags(sp):
        sp.add_argument("--format", choices=["raw", "tokens"], default="raw")
        sp.add_argument("--stopwords", help="stopword file (default: bundled English list)")

    def feature_flags(sp):
        sp.add_argument("--sources", default="vsm,topic,embed")
        sp.add_argument("--embed", choices=["w2v", "d2v"])
        sp.add_argument("--topics", default="auto", help="topic count K or 'auto'")
        sp.add_argument("--topic-grid", default="2:10:1", help="lo:hi:step for automatic K")
        sp.add_argument("--topic-iterations", type=int, default=50)
        sp.add_argument("--embed-dim", type=int, default=200)
        sp.add_argument("--embed-iterations", type=int, default=100)

    def cluster_flags(sp, required=False):
        sp.add_argument("--clusters", type=int, required=required)
        sp.add_argument("--runs", type=int, default=1)
        sp.add_argument("--max-iter", type=int, default=300)
        sp.add_argument("--restarts", type=int, default=1, help="k-means starts per fit")

    sp = sub.add_parser("preprocess", help="tokenize/stem a corpus into corpus.tsv")
    common(sp, True)
    corpus_flags(sp)

    sp = sub.add_parser("features", help="per-source feature matrices")
    common(sp, True)
    corpus_flags(sp)
    feature_flags(sp)

    sp = sub.add_parser("similarity", help="similarity matrices from features_*.csv")
    common(sp)

    sp = sub.add_parser("fuse", help="truncated eigendecomposition + fusion of sim_*.csv")
    common(sp)
    sp.add_argument("--eigen-k", type=int, default=3)

    sp = sub.add_parser("cluster", help="k-means over fused.csv")
    common(sp)
    cluster_flags(sp, True)

    sp = sub.add_parser("evaluate", help="score labels.csv against fused.csv and ground truth")
    common(sp)
    sp.add_argument("--truth")

    for name, helptext in (("run", "end-to-end pipeline"),
                           ("sweep-topics", "topic coherence sweep"),
                           ("sweep-k", "silhouette over a cluster-count range")):
        sp = sub.add_parser(name, help=helptext)
        common(sp, True)
        corpus_flags(sp)
        feature_flags(sp)
        sp.add_argument("--eigen-k", type=int, default=3)
        cluster_flags(sp, name == "run")
        sp.add_argument("--truth")
        sp.add_argument("--cluster-range", default="4:10" if name == "sweep-k" else None)
    return p


def _config(args):
    sources = tuple(s.strip() for s in args.sources.split(",") if s.strip())
    unknown = set(sources) - set(SOURCES)
    if unknown:
        raise ConfigError(f"unknown sources: {sorted(unknown)}")
    return PipelineConfig(
        input=args.input, out=args.out, format=args.format, sources=sources,
        embed=args.embed, topics=args.topics, topic_grid=_range(args.topic_grid, 3),
        eigen_k=getattr(args, "eigen_k", 3), clusters=getattr(args, "clusters", None),
        cluster_range=_range(args.cluster_range, 2) if getattr(args, "cluster_range", None) else None,
        seed=args.seed, runs=getattr(args, "runs", 1), truth=getattr(args, "truth", None),
        stopwords=args.stopwords, topic_iterations=args.topic_iterations,
        embed_dim=args.embed_dim, embed_iterations=args.embed_iterations,
        kmeans_max_iter=getattr(args, "max_iter", 300),
        kmeans_restarts=getattr(args, "restarts", 1),
    )


def _stage_dir(args):
    d = Path(args.input or args.out)
    if not d.is_dir():
        raise DataError(f"{d} is not a stage directory")
    return d


def cmd_preprocess(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stops = load_stopwords(args.stopwords) if args.format == "raw" else frozenset()
    corpus = build_corpus(read_documents(args.input), stops, pre_tokenized=args.format == "tokens")
    write_corpus(corpus, out / "corpus.tsv")
    print(f"documents={corpus.n} terms={corpus.term_count} tokens={corpus.token_count}")


def cmd_features(args):
    p = Pipeline(_config(args))
    for s in p.config.sources:
        fm, _ = p.features(s)
        print(f"{s}: {fm.n} x {fm.dim}")


def cmd_similarity(args):
    d = _stage_dir(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    found = False
    for s in SOURCES:
        path = d / f"features_{s}.csv"
        if path.exists():
            found = True
            write_similarity(similarity_matrix(read_features(path)), out / f"sim_{s}.csv")
            print(f"sim_{s}.csv")
    if not found:
        raise DataError(f"no features_*.csv in {d}")


def cmd_fuse(args):
    d = _stage_dir(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    sims = {s: read_similarity(d / f"sim_{s}.csv") for s in SOURCES if (d / f"sim_{s}.csv").exists()}
    if not sims:
        raise DataError(f"no sim_*.csv in {d}")
    eigs = {s: truncated_eig(m, args.eigen_k) for s, m in sims.items()}
    ff = fuse(eigs, next(iter(sims.values())).doc_ids)
    write_fused(ff, out / "fused.csv")
    print(f"fused: {ff.matrix.shape[0]} x {ff.h}")


def cmd_cluster(args):
    d = _stage_dir(args)
    ff = read_fused(d / "fused.csv")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cl = kmeans(ff.matrix, KMeansConfig(k=args.clusters, max_iter=args.max_iter, seed=args.seed,
                                         n_init=args.restarts))
    write_clustering(cl, ff.doc_ids, out)
    print(f"iterations={cl.iterations_used} E={cl.objective!r}")


def cmd_evaluate(args):
    d = _stage_dir(args)
    ff = read_fused(d / "fused.csv")
    ids, labels = read_labels(d / "labels.csv")
    if ids != ff.doc_ids:
        raise DataError("labels.csv and fused.csv list different documents")
    truth = align_truth(ids, read_truth(args.truth)) if args.truth else None
    report = aggregate_reports([evaluate(ff.matrix, labels, truth)], 1)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(json.dumps({k: v for k, v in report.items() if k != "clusters"}, sort_keys=True))


def cmd_run(args):
    _, cl, report = Pipeline(_config(args)).cluster_and_evaluate()
    print(json.dumps({k: v for k, v in report.items() if k not in ("clusters", "per_run")}, sort_keys=True))


def cmd_sweep_topics(args):
    best, scores = sweep_topics(_config(args))
    for k, v in sorted(scores.items()):
        print(f"K={k} coherence={v:.6f}{'  <- best' if k == best else ''}")


def cmd_sweep_k(args):
    best, scores = sweep_clusters(_config(args))
    for k, v in sorted(scores.items()):
        print(f"k={k} silhouette={v:.6f}{'  <- best' if k == best else ''}")


COMMANDS = {
    "preprocess": cmd_preprocess, "features": cmd_features, "similarity": cmd_similarity,
    "fuse": cmd_fuse, "cluster": cmd_cluster, "evaluate": cmd_evaluate, "run": cmd_run,
    "sweep-topics": cmd_sweep_topics, "sweep-k": cmd_sweep_k,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        COMMANDS[args.command](args)
    except HmffError as exc:
        print(f"hmff: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"hmff: error: {exc}", file=sys.stderr)
        return DataError.exit_code
    except (ArithmeticError, NumericError) as exc:
        print(f"hmff: numeric failure: {exc}", file=sys.stderr)
        return NumericError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
