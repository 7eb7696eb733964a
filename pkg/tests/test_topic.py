import math

import numpy as np
import pytest

from hmff.corpus import make_corpus
from hmff.errors import InvalidConfig
from hmff.synth import disjoint_corpus
from hmff.topic import (LdaConfig, TopicModel, document_sets, gibbs_train, select_topic_count,
                        topic_coherence, topic_features, umass_coherence)


def _histogram_ok(st, K, V):
    doc_topic = np.zeros_like(st.doc_topic)
    topic_word = np.zeros_like(st.topic_word)
    np.add.at(doc_topic, (st.doc_of, st.z), 1)
    np.add.at(topic_word, (st.z, st.words), 1)
    return (np.array_equal(doc_topic, st.doc_topic)
            and np.array_equal(topic_word, st.topic_word)
            and np.array_equal(topic_word.sum(axis=1), st.topic_total))


class TestGibbs:
    def test_counts_match_assignments_every_sweep(self):
        c, _ = disjoint_corpus(2, 10, vocab_size=8, seed=3)
        checked = []
        cfg = LdaConfig(K=3, iterations=15, seed=2)
        gibbs_train(c, cfg, on_sweep=lambda it, st: checked.append(_histogram_ok(st, 3, c.term_count)))
        assert len(checked) == 15 and all(checked)

    def test_rows_normalized(self):
        c, _ = disjoint_corpus(3, 8, seed=4)
        m = gibbs_train(c, LdaConfig(K=4, iterations=10))
        np.testing.assert_allclose(m.theta.sum(axis=1), 1.0, atol=1e-9)
        np.testing.assert_allclose(m.phi.sum(axis=1), 1.0, atol=1e-9)
        assert np.all(m.theta > 0) and np.all(m.phi > 0)

    def test_deterministic(self):
        c, _ = disjoint_corpus(2, 6, seed=1)
        a = gibbs_train(c, LdaConfig(K=2, iterations=10, seed=7))
        b = gibbs_train(c, LdaConfig(K=2, iterations=10, seed=7))
        np.testing.assert_array_equal(a.theta, b.theta)
        np.testing.assert_array_equal(a.phi, b.phi)

    def test_seed_changes_result(self):
        c, _ = disjoint_corpus(2, 6, seed=1)
        a = gibbs_train(c, LdaConfig(K=2, iterations=3, seed=1))
        b = gibbs_train(c, LdaConfig(K=2, iterations=3, seed=2))
        assert not np.array_equal(a.theta, b.theta)

    def test_disjoint_vocabularies_concentrate(self):
        c, _ = disjoint_corpus(2, 20, vocab_size=50)
        m = gibbs_train(c, LdaConfig(K=2, iterations=50))
        assert np.all(m.theta.max(axis=1) >= 0.9)

    def test_estimate_formula(self):
        c = make_corpus([("a", ["x", "y"]), ("b", ["y"])])
        cfg = LdaConfig(K=2, iterations=1, seed=1)
        states = []
        m = gibbs_train(c, cfg, on_sweep=lambda it, st: states.append(st))
        st = states[-1]
        alpha, beta = cfg.doc_prior, cfg.beta
        lengths = np.array([2, 1])[:, None]
        np.testing.assert_allclose(m.theta, (st.doc_topic + alpha) / (lengths + 2 * alpha))
        np.testing.assert_allclose(m.phi, (st.topic_word + beta) / (st.topic_total[:, None] + 2 * beta))

    def test_invalid_config(self):
        with pytest.raises(InvalidConfig):
            LdaConfig(K=1)
        with pytest.raises(InvalidConfig):
            LdaConfig(K=2, beta=0)
        with pytest.raises(InvalidConfig):
            LdaConfig(K=2, iterations=0)

    def test_default_prior(self):
        assert LdaConfig(K=4).doc_prior == 0.25
        assert LdaConfig(K=4, alpha=0.1).doc_prior == 0.1


class TestCoherence:
    def test_always_cooccurring_pair(self):
        D = 4
        sets = [set(range(D)), set(range(D))]
        assert topic_coherence([0, 1], sets) == pytest.approx(0.22314355131420976, abs=1e-15)

    def test_never_cooccurring_pair(self):
        sets = [{0, 1, 2}, {3, 4}]
        # denominator is the document count of the higher-ranked word
        assert topic_coherence([0, 1], sets) == pytest.approx(math.log(1 / 3), abs=1e-15)
        assert topic_coherence([1, 0], sets) == pytest.approx(math.log(1 / 2), abs=1e-15)

    def test_pair_average(self):
        sets = [{0, 1}, {0}, {1, 2}]
        terms = [math.log((1 + 1) / 2), math.log((1 + 1) / 2), math.log((0 + 1) / 1)]
        assert topic_coherence([0, 1, 2], sets) == pytest.approx(sum(terms) / 3, abs=1e-15)

    def test_umass_on_model(self):
        c = make_corpus([("a", ["x", "y"]), ("b", ["x", "y"]), ("c", ["z"])])
        phi = np.array([[0.5, 0.4, 0.1], [0.1, 0.2, 0.7]])
        m = TopicModel(np.full((3, 2), 0.5), phi, LdaConfig(K=2), c.ids)
        sets = document_sets(c)
        expected = (topic_coherence([0, 1], sets) + topic_coherence([2, 1], sets)) / 2
        assert umass_coherence(m, c, top_n=2) == pytest.approx(expected)


class TestSelect:
    def test_singleton(self):
        c, _ = disjoint_corpus(2, 5, seed=2)
        best, scores = select_topic_count(c, [5], LdaConfig(K=2, iterations=5))
        assert best == 5 and list(scores) == [5]

    def test_two_groups_pick_two(self):
        c, _ = disjoint_corpus(2, 20, vocab_size=50)
        best, scores = select_topic_count(c, range(2, 9))
        assert best == 2
        assert len(scores) == 7

    def test_empty_candidates(self):
        c, _ = disjoint_corpus(2, 5)
        with pytest.raises(InvalidConfig):
            select_topic_count(c, [])


def test_features_pass_through():
    m = TopicModel(np.array([[0.7, 0.3]]), np.array([[0.5, 0.5], [0.5, 0.5]]), LdaConfig(K=2), ["d"])
    fm = topic_features(m)
    np.testing.assert_array_equal(fm.rows, [[0.7, 0.3]])
    assert fm.source == "topic"
