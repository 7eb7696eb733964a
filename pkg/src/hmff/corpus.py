"""Corpus ingestion and preprocessing: tokenize, drop stopwords, stem."""
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import porter
from .errors import AllDocumentsEmpty, DataError, DuplicateId

_WORD = re.compile(r"[^\W\d_]+")


@dataclass(frozen=True)
class RawDocument:
    id: str
    text: str


@dataclass
class TokenCorpus:
    """Preprocessed documents sharing one vocabulary.

    ``vocab`` maps token -> dense index assigned in first-occurrence order.
    """

    docs: list  # list of (id, list[str])
    vocab: dict = field(default_factory=dict)

    @property
    def n(self):
        return len(self.docs)

    @property
    def ids(self):
        return [doc_id for doc_id, _ in self.docs]

    @property
    def term_count(self):
        return len(self.vocab)

    @property
    def token_count(self):
        return sum(len(tokens) for _, tokens in self.docs)

    @property
    def words(self):
        """Vocabulary tokens ordered by index."""
        out = [None] * len(self.vocab)
        for tok, i in self.vocab.items():
            out[i] = tok
        return out

    def encoded(self):
        """Documents as lists of vocabulary indices."""
        return [[self.vocab[t] for t in tokens] for _, tokens in self.docs]

    def subset(self, indices):
        return make_corpus([self.docs[i] for i in indices])


def make_corpus(docs):
    """Build a TokenCorpus from ``(id, tokens)`` pairs, dropping empty docs."""
    kept = []
    vocab = {}
    seen = set()
    for doc_id, tokens in docs:
        if doc_id in seen:
            raise DuplicateId(f"duplicate document id {doc_id!r}")
        seen.add(doc_id)
        tokens = list(tokens)
        if not tokens:
            continue
        for tok in tokens:
            if tok not in vocab:
                vocab[tok] = len(vocab)
        kept.append((doc_id, tokens))
    if not kept:
        raise AllDocumentsEmpty("every document is empty after preprocessing")
    return TokenCorpus(kept, vocab)


def tokenize(text):
    """Lowercase alphabetic runs; digits, punctuation and underscores split tokens."""
    return _WORD.findall(text.lower())


def remove_stopwords(tokens, stops):
    return [t for t in tokens if t not in stops]


def stem(token, mode="original"):
    return porter.stem(token, mode)


def load_stopwords(path=None):
    """Read a one-word-per-line stopword file; ``None`` loads the bundled list."""
    if path is None:
        text = resources.files("hmff").joinpath("data/english_stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip())


def preprocess(text, stops, stem_mode="original"):
    return [stem(t, stem_mode) for t in remove_stopwords(tokenize(text), stops)]


def build_corpus(docs, stops=None, pre_tokenized=False, stem_mode="original"):
    """Run the preprocessing pipeline over ``RawDocument`` objects.

    Pre-tokenized input is only whitespace-split; token strings are untouched.
    """
    if stops is None:
        stops = load_stopwords()
    pairs = []
    for doc in docs:
        if pre_tokenized:
            tokens = doc.text.split()
        else:
            tokens = preprocess(doc.text, stops, stem_mode)
        pairs.append((doc.id, tokens))
    return make_corpus(pairs)


def read_documents(path):
    """One document per line (id = 1-based line number), or a directory of files."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"input not found: {path}")
    if path.is_dir():
        names = sorted(os.listdir(path))
        return [
            RawDocument(name, (path / name).read_text(encoding="utf-8"))
            for name in names
            if (path / name).is_file()
        ]
    with open(path, encoding="utf-8") as fh:
        return [RawDocument(str(i), line.rstrip("\n")) for i, line in enumerate(fh, 1)]


def write_corpus(corpus, path):
    """Tab-separated ``id<TAB>tokens`` lines behind a typed header."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"#hmff corpus n={corpus.n} terms={corpus.term_count} tokens={corpus.token_count}\n")
        for doc_id, tokens in corpus.docs:
            fh.write(f"{doc_id}\t{' '.join(tokens)}\n")


def read_corpus(path):
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("#hmff corpus"):
            raise DataError(f"{path}: not a corpus file")
        pairs = []
        for line in fh:
            doc_id, _, rest = line.rstrip("\n").partition("\t")
            pairs.append((doc_id, rest.split()))
    return make_corpus(pairs)
