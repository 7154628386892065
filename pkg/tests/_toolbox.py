"""Shared test helpers: corpus builders and independent brute-force oracles.

The oracle implementations here deliberately avoid the package's data
structures and algorithms: they recompute expected values by raw scanning
and set enumeration so that test expectations are derived independently.
"""

from collections import Counter, defaultdict

from keyselect.corpus import Corpus, Tweet


def make_tweet(tid, user, tags, day=0, text=None, retweet=False):
    if text is None:
        text = " ".join("#" + t for t in tags)
    return Tweet(
        tweet_id=str(tid), user_id=user, day=day, text=text,
        hashtags=tuple(tags), is_retweet=retweet,
    )


def corpus_from_tweets(rows):
    """rows: iterable of (user, [tags]) or (user, [tags], day); one tweet each."""
    tweets = []
    for i, row in enumerate(rows):
        user, tags = row[0], row[1]
        day = row[2] if len(row) > 2 else 0
        tweets.append(make_tweet(i, user, tags, day))
    return Corpus.from_tweets(tweets)


def random_corpus(rng, n_users=12, n_tags=10, n_tweets=40, n_days=1, max_tags_per_tweet=4):
    tweets = []
    for i in range(n_tweets):
        user = f"u{int(rng.integers(n_users)):03d}"
        k = int(rng.integers(1, max_tags_per_tweet + 1))
        tags = [f"h{int(rng.integers(n_tags)):02d}" for _ in range(k)]
        day = int(rng.integers(n_days))
        tweets.append(make_tweet(i, user, tags, day))
    return Corpus.from_tweets(tweets)


def brute_weights(corpus, day_lo, day_hi, kind="user_hashtag"):
    """Edge weights by raw re-scan: {(left_id, tag): occurrence count}."""
    weights = Counter()
    for t in corpus.tweets:
        if not day_lo <= t.day <= day_hi:
            continue
        left = t.user_id if kind == "user_hashtag" else t.tweet_id
        for tag in t.hashtags:
            weights[(left, tag)] += 1
    return dict(weights)


def edge_pairs(weights):
    return set(weights)


def brute_expand(pairs, seeds):
    """Two-step BFS over (left, tag) pairs: seed edges, touched lefts, closure."""
    seeds = set(seeds)
    seed_edges = {(u, t) for (u, t) in pairs if t in seeds}
    touched = {u for (u, _) in seed_edges}
    expanded_edges = {(u, t) for (u, t) in pairs if u in touched}
    expanded_tags = {t for (_, t) in expanded_edges}
    return seed_edges, expanded_edges, expanded_tags


def brute_project_degree(pairs, c):
    """O(|E|^2) pairwise enumeration of distinct co-occurring hashtags."""
    others = set()
    for (u1, t1) in pairs:
        if t1 != c:
            continue
        for (u2, t2) in pairs:
            if u2 == u1 and t2 != c:
                others.add(t2)
    return len(others)


def brute_keyselect(c, pairs, positives, negatives):
    """Materialize N+/N- by scanning all edges, then apply the score formula."""
    adj = defaultdict(set)
    for (u, t) in pairs:
        adj[t].add(u)
    lefts_c = adj.get(c, set())
    pos_lefts = set()
    for p in positives:
        pos_lefts |= adj.get(p, set())
    neg_lefts = set()
    for n in negatives:
        neg_lefts |= adj.get(n, set())
    n_pos = len(lefts_c & pos_lefts)
    n_neg = len(lefts_c & neg_lefts)
    pos_term = n_pos / len(positives) if positives else 0.0
    neg_term = n_neg / len(negatives) if negatives else 0.0
    return pos_term - neg_term


def graph_pairs(graph):
    """(left_id, tag) pairs of a built graph, via its public edge iterator."""
    return {(left, tag) for left, tag, _ in graph.edges()}


def sub_pairs(sub):
    return {(left, tag) for left, tag, _ in sub.expanded_edges()}
