"""Seeded synthetic corpora with known group structure."""
from .corpus import make_corpus
from .rng import SplitMix64


def group_vocab(group, size, prefix="w"):
    # letters only so tokens survive the raw tokenizer untouched
    def name(i):
        s = ""
        i += 1
        while i:
            i, r = divmod(i - 1, 26)
            s = chr(97 + r) + s
        return s
    return [f"{prefix}{name(group)}x{name(j)}" for j in range(size)]


def disjoint_corpus(n_groups, docs_per_group, vocab_size=50, min_len=20, max_len=40, seed=1):
    """Each group draws tokens uniformly from its own private vocabulary.

    Returns ``(TokenCorpus, truth)`` with truth mapping doc id -> group.
    """
    r = SplitMix64(seed)
    vocabs = [group_vocab(g, vocab_size) for g in range(n_groups)]
    docs, truth = [], {}
    for g in range(n_groups):
        for i in range(docs_per_group):
            length = min_len + r.below(max_len - min_len + 1)
            doc_id = f"g{g}d{i}"
            docs.append((doc_id, [vocabs[g][r.below(vocab_size)] for _ in range(length)]))
            truth[doc_id] = g
    return make_corpus(docs), truth


def mixture_corpus(groups, vocabs, docs_per_group, min_len=20, max_len=40, seed=1):
    """Groups given as lists of ``(vocab name, weight)`` mixtures.

    ``vocabs`` maps a name to its token list; each token picks a vocabulary
    by weight, then a word uniformly within it.
    """
    r = SplitMix64(seed)
    docs, truth = [], {}
    for g, mix in enumerate(groups):
        total = sum(w for _, w in mix)
        for i in range(docs_per_group):
            length = min_len + r.below(max_len - min_len + 1)
            tokens = []
            for _ in range(length):
                u = r.random() * total
                for name, w in mix:
                    if u < w:
                        break
                    u -= w
                words = vocabs[name]
                tokens.append(words[r.below(len(words))])
            doc_id = f"g{g}d{i}"
            docs.append((doc_id, tokens))
            truth[doc_id] = g
    return make_corpus(docs), truth
