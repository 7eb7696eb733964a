import math

import numpy as np
import pytest

from hmff.corpus import make_corpus
from hmff.synth import disjoint_corpus
from hmff.vsm import features_from_stats, tfidf_stats, tfidf_weight, vsm_features

from oracles import tfidf_oracle, random_token_corpus


class TestWeight:
    def test_hand_value(self):
        assert tfidf_weight(2, 3, 1, 2) == pytest.approx(0.462098120373296873, abs=1e-15)

    def test_df_equals_n(self):
        assert tfidf_weight(5, 7, 4, 4) == 0.0

    def test_absent_token(self):
        assert tfidf_weight(0, 7, 1, 4) == 0.0


class TestMatrix:
    def test_two_doc_example(self):
        c = make_corpus([("d1", ["a", "a", "b"]), ("d2", ["b", "c"])])
        fm = vsm_features(c)
        expected = [[0.462098120373296873, 0.0, 0.0], [0.0, 0.0, 0.346573590279972655]]
        np.testing.assert_allclose(fm.rows, expected, atol=1e-15)
        assert fm.source == "vsm"
        assert fm.doc_ids == ["d1", "d2"]

    def test_single_doc_is_zero(self):
        fm = vsm_features(make_corpus([("d", ["a", "b", "a"])]))
        np.testing.assert_array_equal(fm.rows, np.zeros((1, 2)))

    def test_unique_tokens_structure(self):
        c, _ = disjoint_corpus(3, 4, vocab_size=6, seed=5)
        fm = vsm_features(c)
        enc = c.encoded()
        for i in range(c.n):
            others = set().union(*(set(d) for j, d in enumerate(enc) if j != i))
            unique = set(enc[i]) - others
            for j in unique:
                assert fm.rows[i, j] > 0

    def test_two_paths_agree(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            c = random_token_corpus(rng)
            a = vsm_features(c).rows
            b = features_from_stats(tfidf_stats(c), c.ids).rows
            np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)

    def test_matches_oracle(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            c = random_token_corpus(rng)
            np.testing.assert_allclose(vsm_features(c).rows, tfidf_oracle(c.encoded(), c.term_count),
                                       rtol=0, atol=1e-12)

    def test_document_permutation_equivariant(self):
        rng = np.random.default_rng(5)
        c = random_token_corpus(rng)
        perm = rng.permutation(c.n)
        cp = make_corpus([c.docs[i] for i in perm])
        a = vsm_features(c).rows
        b = vsm_features(cp).rows
        # reorder b's columns into c's vocabulary order
        cols = [cp.vocab[w] for w in c.words]
        np.testing.assert_allclose(b[:, cols], a[perm], atol=1e-15)

    def test_nonnegative(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            assert np.all(vsm_features(random_token_corpus(rng)).rows >= 0)


def test_log_base_is_natural():
    c = make_corpus([("x", ["a"]), ("y", ["b"]), ("z", ["b"])])
    assert vsm_features(c).rows[0, 0] == pytest.approx(math.log(3))
