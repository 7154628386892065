"""Text-based keyword ranking baselines: tf-idf and skip-gram embeddings.

Both operate on the tokenized texts of the current positive-keyword sample
and rank only tokens from the hashtag vocabulary. Retweet texts are excluded
from all text processing.
"""

import math
import re
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .corpus import Corpus, extract_hashtags, normalize_hashtag
from .errors import TextError

_URL_RE = re.compile(r"https?://\S+")
_MENTION_RE = re.compile(r"@\w+")


@dataclass(frozen=True)
class TokenizedDoc:
    tweet_id: str
    tokens: tuple[str, ...]


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens; URLs and mentions stripped, hashtags kept
    as tokens without '#' (normalized the same way as graph hashtags)."""
    text = _URL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    tokens = []
    for piece in text.split():
        if piece.startswith("#"):
            tokens.extend(extract_hashtags(piece))
        else:
            w = normalize_hashtag(piece)
            if w:
                tokens.append(w)
    return tokens


def tokenize_tweet(tweet) -> TokenizedDoc:
    return TokenizedDoc(tweet_id=tweet.tweet_id, tokens=tuple(tokenize(tweet.text)))


def build_sample(corpus: Corpus, day_lo: int, day_hi: int, positives) -> list[TokenizedDoc]:
    """Tokenized non-retweet tweets in the window mentioning a positive tag."""
    positives = set(positives)
    docs = []
    for t in corpus.in_day_range(day_lo, day_hi):
        if t.is_retweet:
            continue
        if positives.intersection(t.hashtags):
            docs.append(tokenize_tweet(t))
    return docs


def tfidf_score(k: str, t: TokenizedDoc, corpus: list[TokenizedDoc]) -> float:
    """tf(k, t) * idf(k, corpus) with natural-log idf.

    tf is the count of k in t over t's token count; idf is ln(N / df). A
    term absent from every document scores 0 by convention.
    """
    if len(t.tokens) == 0:
        return 0.0
    df = sum(1 for d in corpus if k in d.tokens)
    if df == 0:
        return 0.0
    tf = t.tokens.count(k) / len(t.tokens)
    return tf * math.log(len(corpus) / df)


def tfidf_table(docs: list[TokenizedDoc], vocab, reduction: str = "sum") -> dict:
    """Aggregate tf-idf per vocabulary token across documents.

    Reduction is "sum" (default) or "max" over per-document scores. Tokens
    never appearing score 0.
    """
    if reduction not in ("sum", "max"):
        raise ValueError(f"unknown reduction {reduction!r}")
    vocab = set(vocab)
    df = Counter()
    for d in docs:
        df.update(set(d.tokens) & vocab)
    n_docs = len(docs)
    table = {}
    for d in docs:
        if len(d.tokens) == 0:
            continue
        counts = Counter(tok for tok in d.tokens if tok in vocab)
        for tok, cnt in counts.items():
            score = (cnt / len(d.tokens)) * math.log(n_docs / df[tok])
            if reduction == "sum":
                table[tok] = table.get(tok, 0.0) + score
            else:
                table[tok] = max(table.get(tok, 0.0), score)
    return table


def tfidf_rank(docs, hashtag_vocab, exclude, b: int, reduction: str = "sum") -> list[str]:
    """Top-b hashtag-vocabulary tokens by aggregated tf-idf, labeled excluded."""
    table = tfidf_table(docs, hashtag_vocab, reduction=reduction)
    exclude = set(exclude)
    cands = [t for t in hashtag_vocab if t not in exclude]
    cands.sort(key=lambda t: (-table.get(t, 0.0), t))
    return cands[:b]


@dataclass
class EmbeddingModel:
    vocabulary: dict
    vectors: np.ndarray
    dim: int

    def vector(self, token: str):
        i = self.vocabulary.get(token)
        return None if i is None else self.vectors[i]

    def save_text(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for token in sorted(self.vocabulary, key=self.vocabulary.get):
                vec = self.vectors[self.vocabulary[token]]
                fh.write(token + " " + " ".join(repr(float(x)) for x in vec) + "\n")


def load_text_model(path) -> EmbeddingModel:
    vocabulary = {}
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.rstrip("\n").split(" ")
            vocabulary[parts[0]] = len(rows)
            rows.append([float(x) for x in parts[1:]])
    vectors = np.array(rows, dtype=np.float64)
    return EmbeddingModel(vocabulary=vocabulary, vectors=vectors, dim=vectors.shape[1])


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def train_skipgram(docs, dim: int = 32, window: int = 5, negatives: int = 5,
                   epochs: int = 5, lr: float = 0.025, min_count: int = 2,
                   rng_seed: int = 0) -> EmbeddingModel:
    """Plain skip-gram with negative sampling, single-threaded and seeded.

    Fixed (non-shrinking) context window; constant learning rate; noise
    distribution proportional to count^0.75. Deterministic per backend for
    a fixed seed.
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    counts = Counter()
    for d in docs:
        counts.update(d.tokens)
    vocab_tokens = sorted(
        (t for t, c in counts.items() if c >= min_count),
        key=lambda t: (-counts[t], t),
    )
    if not vocab_tokens:
        raise TextError("corpus too small")
    vocabulary = {t: i for i, t in enumerate(vocab_tokens)}

    centers = []
    contexts = []
    for d in docs:
        ids = [vocabulary[t] for t in d.tokens if t in vocabulary]
        for i, c in enumerate(ids):
            lo = max(0, i - window)
            hi = min(len(ids), i + window + 1)
            for j in range(lo, hi):
                if j != i:
                    centers.append(c)
                    contexts.append(ids[j])
    if not centers:
        raise TextError("corpus too small")
    centers = np.array(centers, dtype=np.int32)
    contexts = np.array(contexts, dtype=np.int32)

    freq = np.array([counts[t] for t in vocab_tokens], dtype=np.float64)
    noise = freq ** 0.75
    noise_cdf = np.cumsum(noise / noise.sum())

    rng = np.random.default_rng(rng_seed)
    n_vocab = len(vocab_tokens)
    w_in = (rng.random((n_vocab, dim)) - 0.5) / dim
    w_out = np.zeros((n_vocab, dim), dtype=np.float64)

    for _ in range(epochs):
        draws = rng.random((len(centers), negatives))
        negs = np.searchsorted(noise_cdf, draws).astype(np.int32)
        _kernels.sgns_train(w_in, w_out, centers, contexts, negs, lr)

    return EmbeddingModel(vocabulary=vocabulary, vectors=w_in, dim=dim)


def seed_centroid(model: EmbeddingModel, seeds):
    """Mean vector of the seeds present in the vocabulary; None if none are."""
    vecs = [model.vector(s) for s in sorted(seeds)]
    vecs = [v for v in vecs if v is not None]
    if not vecs:
        return None
    return np.mean(vecs, axis=0)


def embedding_rank(model: EmbeddingModel, seeds, exclude, b: int, hashtag_vocab) -> list[str]:
    """Top-b hashtag tokens by cosine similarity to the mean seed vector."""
    centroid = seed_centroid(model, seeds)
    if centroid is None:
        raise TextError("seeds out of vocabulary")
    exclude = set(exclude)
    scored = []
    for t in sorted(hashtag_vocab):
        if t in exclude:
            continue
        v = model.vector(t)
        if v is None:
            continue
        scored.append((-cosine(v, centroid), t))
    scored.sort()
    return [t for _, t in scored[:b]]
