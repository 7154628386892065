"""Tokenization, tf-idf ranking, and the skip-gram embedding baseline."""

import math

import numpy as np
import pytest

from keyselect.corpus import Corpus
from keyselect.errors import TextError
from keyselect.text_baselines import (
    EmbeddingModel,
    TokenizedDoc,
    build_sample,
    cosine,
    embedding_rank,
    load_text_model,
    seed_centroid,
    tfidf_rank,
    tfidf_score,
    tfidf_table,
    tokenize,
    train_skipgram,
)

from _toolbox import make_tweet

LN2 = math.log(2.0)


def doc(*tokens, tweet_id="t"):
    return TokenizedDoc(tweet_id=tweet_id, tokens=tuple(tokens))


class TestTokenize:
    def test_urls_and_mentions_stripped(self):
        assert tokenize("see https://x.co/ab @bob #Tag now") == ["see", "tag", "now"]

    def test_hashtags_normalized_like_graph(self):
        assert tokenize("#CoVid—19. spike") == ["covid–19", "spike"]

    def test_glued_hashtags_split(self):
        assert tokenize("#a#b plain") == ["a", "b", "plain"]

    def test_trailing_punctuation_dropped_from_words(self):
        assert tokenize("Hello, world!") == ["hello", "world"]

    def test_empty_pieces_vanish(self):
        assert tokenize("@only @mentions https://u.rl") == []


class TestBuildSample:
    def make_corpus(self):
        return Corpus.from_tweets([
            make_tweet("t1", "u1", ["flu", "news"], 0, text="#flu #news today"),
            make_tweet("t2", "u1", ["flu"], 0, text="RT #flu", retweet=True),
            make_tweet("t3", "u2", ["other"], 0, text="#other stuff"),
            make_tweet("t4", "u2", ["flu"], 2, text="#flu late"),
        ])

    def test_filters_retweets_and_non_positive(self):
        docs = build_sample(self.make_corpus(), 0, 0, {"flu"})
        assert [d.tweet_id for d in docs] == ["t1"]
        assert docs[0].tokens == ("flu", "news", "today")

    def test_day_window(self):
        docs = build_sample(self.make_corpus(), 0, 2, {"flu"})
        assert [d.tweet_id for d in docs] == ["t1", "t4"]


class TestTfidf:
    def test_hand_value(self):
        d1, d2 = doc("a", "b"), doc("b", "c")
        assert tfidf_score("a", d1, [d1, d2]) == pytest.approx(0.5 * LN2)
        assert tfidf_score("b", d1, [d1, d2]) == pytest.approx(0.0)  # idf ln(1)
        assert tfidf_score("z", d1, [d1, d2]) == 0.0
        assert tfidf_score("a", doc(), [d1, d2]) == 0.0

    def test_table_sum_and_max(self):
        docs = [doc("a", "a", "b"), doc("b", "c"), doc("c")]
        ln3, ln15 = math.log(3.0), math.log(1.5)
        table = tfidf_table(docs, {"a", "b", "c"})
        assert table["a"] == pytest.approx(2 / 3 * ln3)
        assert table["b"] == pytest.approx((1 / 3 + 1 / 2) * ln15)
        assert table["c"] == pytest.approx((1 / 2 + 1) * ln15)
        table_max = tfidf_table(docs, {"a", "b", "c"}, reduction="max")
        assert table_max["b"] == pytest.approx(1 / 2 * ln15)
        assert table_max["c"] == pytest.approx(1 * ln15)

    def test_table_rejects_unknown_reduction(self):
        with pytest.raises(ValueError):
            tfidf_table([doc("a")], {"a"}, reduction="median")

    def test_table_invariant_to_doc_order(self):
        docs = [doc("a", "b"), doc("b", "c"), doc("a", "c", "c")]
        assert tfidf_table(docs, {"a", "b", "c"}) == tfidf_table(docs[::-1], {"a", "b", "c"})

    def test_rank_excludes_and_breaks_ties_lexicographically(self):
        docs = [doc("hot", "hot", "warm"), doc("cold")]
        ranking = tfidf_rank(docs, {"hot", "warm", "cold", "ghost"}, {"cold"}, 10)
        assert ranking[0] == "hot"
        assert "cold" not in ranking
        assert ranking[-1] == "ghost"  # never seen, score 0, still listed

    def test_rank_respects_budget(self):
        docs = [doc("a", "b", "c")]
        assert len(tfidf_rank(docs, {"a", "b", "c"}, set(), 2)) == 2


def two_cluster_docs(n_per=200):
    docs = []
    for i in range(n_per):
        docs.append(doc("x", "ca", "y", tweet_id=f"a{i}"))
        docs.append(doc("z", "cb", "w", tweet_id=f"b{i}"))
    return docs


class TestSkipgram:
    def test_determinism_and_shape(self):
        docs = two_cluster_docs(40)
        m1 = train_skipgram(docs, dim=8, epochs=2, rng_seed=3)
        m2 = train_skipgram(docs, dim=8, epochs=2, rng_seed=3)
        assert m1.vocabulary == m2.vocabulary
        assert np.array_equal(m1.vectors, m2.vectors)
        assert m1.vectors.shape == (6, 8)
        assert np.all(np.isfinite(m1.vectors))
        m3 = train_skipgram(docs, dim=8, epochs=2, rng_seed=4)
        assert not np.array_equal(m1.vectors, m3.vectors)

    def test_vocabulary_order_by_count_then_token(self):
        docs = [doc("b", "b", "a", "a", "c", "c", "c")] * 2
        model = train_skipgram(docs, dim=4, epochs=1)
        assert list(model.vocabulary) == ["c", "a", "b"]
        assert [model.vocabulary[t] for t in ("c", "a", "b")] == [0, 1, 2]

    def test_min_count_filters_rare_tokens(self):
        docs = [doc("a", "b"), doc("a", "b"), doc("a", "rare")]
        model = train_skipgram(docs, dim=4, epochs=1, min_count=2)
        assert "rare" not in model.vocabulary
        assert model.vector("rare") is None

    def test_too_small_corpus_raises(self):
        with pytest.raises(TextError, match="corpus too small"):
            train_skipgram([], dim=4)
        with pytest.raises(TextError, match="corpus too small"):
            train_skipgram([doc("a"), doc("b")], dim=4, min_count=2)
        # vocab survives min_count but every doc has one in-vocab token: no pairs
        with pytest.raises(TextError, match="corpus too small"):
            train_skipgram([doc("a"), doc("a")], dim=4, min_count=2, window=2)

    def test_shared_context_aligns_vectors(self):
        model = train_skipgram(two_cluster_docs(), dim=16, epochs=5, rng_seed=0)
        same = cosine(model.vector("x"), model.vector("y"))
        cross = max(
            cosine(model.vector("x"), model.vector("z")),
            cosine(model.vector("x"), model.vector("w")),
        )
        assert same > cross


class TestEmbeddingModel:
    def test_save_load_round_trip(self, tmp_path):
        model = train_skipgram(two_cluster_docs(40), dim=8, epochs=1)
        path = tmp_path / "vectors.txt"
        model.save_text(path)
        loaded = load_text_model(path)
        assert loaded.vocabulary == model.vocabulary
        assert loaded.dim == model.dim
        assert np.array_equal(loaded.vectors, model.vectors)  # repr round-trips floats

    def test_cosine_edge_cases(self):
        z = np.zeros(3)
        u = np.array([1.0, 0.0, 0.0])
        v = np.array([0.0, 2.0, 0.0])
        assert cosine(z, u) == 0.0
        assert cosine(u, v) == pytest.approx(0.0)
        assert cosine(u, 3 * u) == pytest.approx(1.0)

    def test_seed_centroid_uses_present_seeds_only(self):
        model = EmbeddingModel(
            vocabulary={"a": 0, "b": 1},
            vectors=np.array([[1.0, 0.0], [0.0, 1.0]]),
            dim=2,
        )
        centroid = seed_centroid(model, {"a", "missing"})
        assert np.allclose(centroid, [1.0, 0.0])
        assert seed_centroid(model, {"missing"}) is None


class TestEmbeddingRank:
    def make_model(self):
        rng = np.random.default_rng(9)
        tokens = [f"h{i:02d}" for i in range(10)]
        vectors = rng.normal(size=(10, 6))
        return EmbeddingModel(
            vocabulary={t: i for i, t in enumerate(tokens)},
            vectors=vectors,
            dim=6,
        ), tokens

    def test_matches_brute_cosine_ordering(self):
        model, tokens = self.make_model()
        seeds = {"h00", "h01"}
        exclude = seeds | {"h05"}
        got = embedding_rank(model, seeds, exclude, 4, tokens)
        centroid = np.mean([model.vectors[0], model.vectors[1]], axis=0)
        expected = sorted(
            (t for t in tokens if t not in exclude),
            key=lambda t: (-cosine(model.vector(t), centroid), t),
        )[:4]
        assert got == expected

    def test_oov_candidates_skipped(self):
        model, tokens = self.make_model()
        got = embedding_rank(model, {"h00"}, {"h00"}, 20, tokens + ["ghost"])
        assert "ghost" not in got
        assert len(got) == 9

    def test_all_seeds_oov_raises(self):
        model, tokens = self.make_model()
        with pytest.raises(TextError, match="seeds out of vocabulary"):
            embedding_rank(model, {"ghost"}, set(), 3, tokens)
