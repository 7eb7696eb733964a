"""Shared fixtures-on-disk for pipeline level tests."""
from pathlib import Path


def write_token_files(corpus, truth, directory):
    """Token-format corpus (line-number ids) plus a matching truth CSV."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    docs = directory / "docs.txt"
    truth_path = directory / "truth.csv"
    with open(docs, "w", encoding="utf-8") as fh:
        for _, tokens in corpus.docs:
            fh.write(" ".join(tokens) + "\n")
    with open(truth_path, "w", encoding="utf-8") as fh:
        fh.write("doc_id,class\n")
        for i, (doc_id, _) in enumerate(corpus.docs, 1):
            fh.write(f"{i},{truth[doc_id]}\n")
    return docs, truth_path


def output_bytes(directory, skip=("manifest.json",)):
    directory = Path(directory)
    return {p.name: p.read_bytes() for p in sorted(directory.iterdir()) if p.name not in skip}
