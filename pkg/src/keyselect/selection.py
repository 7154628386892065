"""Active keyword selection: label state, candidate queue, scoring, and the
budgeted oracle loop.

A session is initialized from a day graph and the current positive keywords:
the seed neighborhood is expanded one hop along the left dimension, every
unlabeled expanded hashtag is scored and enqueued, then the loop repeatedly
pops the top candidate, queries the oracle, and on positive answers rescores
and pushes the candidate's one-hop hashtag neighbors.
"""

import heapq
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, text_baselines
from .errors import SelectionError, TextError
from .graph import BipartiteGraph, SeedSubgraph, expand_seed

METHOD_NAMES = ("keyselect", "random_walk", "degree_centrality", "tfidf", "word2vec")

POSITIVE = "positive"
NEGATIVE = "negative"


@dataclass(frozen=True)
class Method:
    """Selection method plus its per-method parameters."""

    name: str
    rng_seed: int = 0
    dim: int = 32
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    lr: float = 0.025
    min_count: int = 2
    reduction: str = "sum"

    def __post_init__(self):
        if self.name not in METHOD_NAMES:
            raise ValueError(f"unknown method {self.name!r}")
        if self.reduction not in ("sum", "max"):
            raise ValueError(f"unknown reduction {self.reduction!r}")


@dataclass
class HistoryEntry:
    round: int
    day: int
    hashtag: str
    label: str
    score: float

    def to_dict(self) -> dict:
        return {
            "round": self.round,
            "day": self.day,
            "hashtag": self.hashtag,
            "label": self.label,
            "score": self.score,
        }


class LabelState:
    """Seeds plus the evolving positive/negative label sets and history."""

    def __init__(self, seeds):
        self.seeds = frozenset(seeds)
        self.positives = set(self.seeds)
        self.negatives = set()
        self.history: list[HistoryEntry] = []

    def is_labeled(self, tag: str) -> bool:
        return tag in self.positives or tag in self.negatives

    def label_of(self, tag: str):
        if tag in self.positives:
            return POSITIVE
        if tag in self.negatives:
            return NEGATIVE
        return None

    def apply(self, tag: str, positive: bool, round_no: int, day: int, score: float) -> HistoryEntry:
        if self.is_labeled(tag):
            raise SelectionError(f"hashtag {tag!r} already labeled {self.label_of(tag)}")
        if positive:
            self.positives.add(tag)
        else:
            self.negatives.add(tag)
        entry = HistoryEntry(
            round=round_no,
            day=day,
            hashtag=tag,
            label=POSITIVE if positive else NEGATIVE,
            score=float(score),
        )
        self.history.append(entry)
        return entry


def to_export(state: LabelState) -> dict:
    return {
        "seeds": sorted(state.seeds),
        "positives": sorted(state.positives),
        "negatives": sorted(state.negatives),
        "history": [e.to_dict() for e in state.history],
    }


def from_export(data: dict) -> LabelState:
    state = LabelState(data["seeds"])
    state.positives = set(data["positives"])
    state.negatives = set(data["negatives"])
    state.history = [
        HistoryEntry(
            round=e["round"], day=e["day"], hashtag=e["hashtag"],
            label=e["label"], score=float(e["score"]),
        )
        for e in data["history"]
    ]
    return state


class CandidateQueue:
    """Max-priority queue with lazy deletion.

    Equal scores pop in ascending lexicographic hashtag order. Re-pushing a
    hashtag only takes effect when the new score is strictly better; pop and
    peek skip labeled hashtags and entries superseded by a better push.
    """

    def __init__(self):
        self._heap = []
        self._best = {}

    def push(self, tag: str, score: float) -> bool:
        score = float(score)
        prev = self._best.get(tag)
        if prev is not None and prev >= score:
            return False
        self._best[tag] = score
        heapq.heappush(self._heap, (-score, tag))
        return True

    def enqueued(self, tag: str) -> bool:
        return tag in self._best

    def enqueued_tags(self) -> set:
        return set(self._best)

    def best_score(self, tag: str):
        return self._best.get(tag)

    def pop(self, is_labeled):
        while self._heap:
            neg, tag = heapq.heappop(self._heap)
            if is_labeled(tag) or -neg != self._best.get(tag):
                continue
            return tag, -neg
        return None

    def peek(self, is_labeled):
        while self._heap:
            neg, tag = self._heap[0]
            if is_labeled(tag) or -neg != self._best.get(tag):
                heapq.heappop(self._heap)
                continue
            return tag, -neg
        return None

    def live_count(self, is_labeled) -> int:
        return sum(1 for tag in self._best if not is_labeled(tag))

    def __len__(self) -> int:
        return len(self._heap)


class StaticOracle:
    """Membership oracle over a fixed ground-truth keyword set."""

    def __init__(self, keywords):
        self.keywords = frozenset(keywords)

    def is_relevant(self, tag: str) -> bool:
        return tag in self.keywords


class InteractiveOracle:
    """Oracle backed by a caller-supplied answer channel (e.g. a human)."""

    def __init__(self, ask):
        self._ask = ask

    def is_relevant(self, tag: str) -> bool:
        return bool(self._ask(tag))


class Scorer:
    """Base scorer; counts score evaluations for the complexity contract."""

    def __init__(self):
        self.evaluations = 0

    def score(self, tag: str) -> float:
        raise NotImplementedError

    def score_batch(self, tags) -> list[float]:
        return [self.score(t) for t in tags]

    def notify_label(self, tag: str, positive: bool) -> None:
        pass


class KeySelectScorer(Scorer):
    """s(c) = |N+(c)|/|L+| - |N-(c)|/|L-| over the expanded edge set.

    N+(c) (N-(c)) is the set of distinct active left nodes adjacent to both
    c and at least one positive (negative) hashtag; a term with an empty
    label set contributes 0. Per-left flags are maintained incrementally as
    labels arrive.
    """

    def __init__(self, sub: SeedSubgraph, state: LabelState):
        super().__init__()
        self.sub = sub
        self.state = state
        g = sub.parent
        self._pos_flag = np.zeros(g.n_lefts, dtype=np.uint8)
        self._neg_flag = np.zeros(g.n_lefts, dtype=np.uint8)
        for p in sorted(state.positives):
            self._mark(p, self._pos_flag)
        for n in sorted(state.negatives):
            self._mark(n, self._neg_flag)

    def _mark(self, tag: str, flag: np.ndarray) -> None:
        g = self.sub.parent
        j = g.tag_index(tag)
        if j is None:
            return
        idx = g.tag_lefts[g.tag_indptr[j]:g.tag_indptr[j + 1]]
        flag[idx] = flag[idx] | self.sub.active_left[idx]

    def notify_label(self, tag: str, positive: bool) -> None:
        self._mark(tag, self._pos_flag if positive else self._neg_flag)

    def _terms(self, pos_cnt: int, neg_cnt: int) -> float:
        n_pos = len(self.state.positives)
        n_neg = len(self.state.negatives)
        pos = pos_cnt / n_pos if n_pos else 0.0
        neg = neg_cnt / n_neg if n_neg else 0.0
        return pos - neg

    def score(self, tag: str) -> float:
        self.evaluations += 1
        g = self.sub.parent
        j = g.tag_index(tag)
        if j is None:
            return self._terms(0, 0)
        adj = g.tag_lefts[g.tag_indptr[j]:g.tag_indptr[j + 1]]
        pos_cnt = int(np.count_nonzero(self._pos_flag[adj]))
        neg_cnt = int(np.count_nonzero(self._neg_flag[adj]))
        return self._terms(pos_cnt, neg_cnt)

    def score_batch(self, tags) -> list[float]:
        g = self.sub.parent
        idx = [(i, g.tag_index(t)) for i, t in enumerate(tags)]
        present = [(i, j) for i, j in idx if j is not None]
        out = [self._terms(0, 0)] * len(tags)
        if present:
            cands = np.array([j for _, j in present], dtype=np.int64)
            pos_cnts, neg_cnts = _kernels.labeled_neighbor_counts(
                g.tag_indptr, g.tag_lefts, cands, self._pos_flag, self._neg_flag,
            )
            for (i, _), p, q in zip(present, pos_cnts, neg_cnts):
                out[i] = self._terms(int(p), int(q))
        self.evaluations += len(tags)
        return out


class RandomWalkScorer(Scorer):
    """Uniform pseudo-random scores from a session-scoped generator."""

    def __init__(self, rng: np.random.Generator):
        super().__init__()
        self.rng = rng

    def score(self, tag: str) -> float:
        self.evaluations += 1
        return float(self.rng.random())


class DegreeCentralityScorer(Scorer):
    """Distinct co-occurring hashtag count within the expanded edge set."""

    def __init__(self, sub: SeedSubgraph):
        super().__init__()
        self.sub = sub

    def _degrees(self, indices: np.ndarray) -> np.ndarray:
        g = self.sub.parent
        return _kernels.cooccurrence_degrees(
            indices, g.tag_indptr, g.tag_lefts, g.left_indptr, g.left_tags,
            self.sub.active_left,
        )

    def score(self, tag: str) -> float:
        self.evaluations += 1
        j = self.sub.parent.tag_index(tag)
        if j is None:
            return 0.0
        return float(self._degrees(np.array([j], dtype=np.int64))[0])

    def score_batch(self, tags) -> list[float]:
        g = self.sub.parent
        idx = [(i, g.tag_index(t)) for i, t in enumerate(tags)]
        present = [(i, j) for i, j in idx if j is not None]
        out = [0.0] * len(tags)
        if present:
            cands = np.array([j for _, j in present], dtype=np.int64)
            degs = self._degrees(cands)
            for (i, _), d in zip(present, degs):
                out[i] = float(d)
        self.evaluations += len(tags)
        return out


class TfidfScorer(Scorer):
    """Aggregated tf-idf over the positive-keyword tweet sample."""

    def __init__(self, table: dict):
        super().__init__()
        self.table = table

    def score(self, tag: str) -> float:
        self.evaluations += 1
        return float(self.table.get(tag, 0.0))


OOV_SCORE = -2.0  # below the cosine range, so in-vocabulary candidates win


class EmbeddingScorer(Scorer):
    """Cosine similarity to the mean positive-keyword vector."""

    def __init__(self, model, centroid):
        super().__init__()
        self.model = model
        self.centroid = centroid

    def score(self, tag: str) -> float:
        self.evaluations += 1
        if self.model is None or self.centroid is None:
            return OOV_SCORE
        vec = self.model.vector(tag)
        if vec is None:
            return OOV_SCORE
        return text_baselines.cosine(vec, self.centroid)


def score_keyselect(c: str, sub: SeedSubgraph, labels: LabelState) -> float:
    if labels.is_labeled(c):
        raise SelectionError(f"hashtag {c!r} is already labeled")
    return KeySelectScorer(sub, labels).score(c)


def score_random_walk(c: str, rng: np.random.Generator) -> float:
    return RandomWalkScorer(rng).score(c)


def score_degree_centrality(c: str, sub: SeedSubgraph) -> int:
    return int(DegreeCentralityScorer(sub).score(c))


def make_scorer(method: Method, sub: SeedSubgraph, state: LabelState,
                corpus=None, rng: np.random.Generator = None) -> Scorer:
    if method.name == "keyselect":
        return KeySelectScorer(sub, state)
    if method.name == "random_walk":
        if rng is None:
            rng = np.random.default_rng(method.rng_seed)
        return RandomWalkScorer(rng)
    if method.name == "degree_centrality":
        return DegreeCentralityScorer(sub)

    if corpus is None:
        raise SelectionError(f"method {method.name!r} requires a corpus")
    g = sub.parent
    docs = text_baselines.build_sample(corpus, g.day_lo, g.day_hi, state.positives)
    if method.name == "tfidf":
        table = text_baselines.tfidf_table(docs, g.tags, reduction=method.reduction)
        return TfidfScorer(table)
    # word2vec: retrain on the current sample; degrade to OOV scores when the
    # sample cannot support training or holds no positive keyword vectors
    if rng is None:
        rng = np.random.default_rng(method.rng_seed)
    train_seed = int(rng.integers(2 ** 63))
    try:
        model = text_baselines.train_skipgram(
            docs, dim=method.dim, window=method.window, negatives=method.negatives,
            epochs=method.epochs, lr=method.lr, min_count=method.min_count,
            rng_seed=train_seed,
        )
    except TextError:
        return EmbeddingScorer(None, None)
    centroid = text_baselines.seed_centroid(model, state.positives)
    return EmbeddingScorer(model, centroid)


@dataclass(eq=False)
class ActiveSession:
    """Bundle of one selection session's state; unpacks to (state, queue, sub)."""

    state: LabelState
    queue: CandidateQueue
    sub: SeedSubgraph
    scorer: Scorer
    method: Method
    graph: BipartiteGraph
    corpus: object = None
    day: int = 0
    rounds: int = 0
    last_rounds_used: int = 0
    init_evaluations: int = 0

    def __iter__(self):
        return iter((self.state, self.queue, self.sub))


def init_session(graph: BipartiteGraph, seeds, method: Method,
                 prior_labels: LabelState = None, *, corpus=None, day: int = None,
                 rng: np.random.Generator = None) -> ActiveSession:
    """Expand the current positives, score all candidates, fill the queue.

    With prior_labels the label state is carried forward intact and the
    subgraph is rebuilt from all current positives. The candidate set is the
    expanded vocabulary minus every labeled hashtag; candidates are scored
    in sorted order so runs are reproducible.
    """
    if prior_labels is not None:
        state = prior_labels
    else:
        state = LabelState(frozenset(seeds))
    if not state.positives:
        raise SelectionError("no seed keywords")

    sub = expand_seed(graph, state.positives)
    scorer = make_scorer(method, sub, state, corpus=corpus, rng=rng)
    candidates = sorted(sub.expanded_hashtags - state.positives - state.negatives)
    queue = CandidateQueue()
    for tag, score in zip(candidates, scorer.score_batch(candidates)):
        queue.push(tag, score)

    return ActiveSession(
        state=state,
        queue=queue,
        sub=sub,
        scorer=scorer,
        method=method,
        graph=graph,
        corpus=corpus,
        day=graph.day_lo if day is None else day,
        rounds=len(state.history),
        init_evaluations=scorer.evaluations,
    )


def _push_neighbors(session: ActiveSession, tag: str) -> None:
    """Score and enqueue the unlabeled one-hop hashtag neighbors of tag."""
    g = session.graph
    j = g.tag_index(tag)
    if j is None:
        return
    for nj in session.sub.one_hop_tag_indices(j):
        neighbor = g.tags[int(nj)]
        if session.state.is_labeled(neighbor):
            continue
        session.queue.push(neighbor, session.scorer.score(neighbor))


def run_round(session: ActiveSession, oracle, budget: int) -> LabelState:
    """Alg. 1 loop: pop, query, update labels, expand on positives.

    Every oracle query consumes one unit of budget, negative answers
    included. Returns early if the queue exhausts; the number of queries
    actually spent is recorded on the session.
    """
    if budget < 1:
        raise SelectionError("budget must be >= 1")
    state = session.state
    used = 0
    while used < budget:
        popped = session.queue.pop(state.is_labeled)
        if popped is None:
            break
        tag, score = popped
        used += 1
        session.rounds += 1
        positive = bool(oracle.is_relevant(tag))
        state.apply(tag, positive, round_no=session.rounds, day=session.day, score=score)
        session.scorer.notify_label(tag, positive)
        if positive:
            _push_neighbors(session, tag)
    session.last_rounds_used = used
    return state


@dataclass
class Suggestion:
    hashtag: str
    score: float
    frequency: int
    positive_cooccurrence: int
    sample_tweets: list[str]

    def to_dict(self) -> dict:
        return {
            "hashtag": self.hashtag,
            "score": self.score,
            "frequency": self.frequency,
            "positive_cooccurrence": self.positive_cooccurrence,
            "sample_tweets": self.sample_tweets,
        }


def suggest_next(session: ActiveSession):
    """Non-consuming peek at the top candidate, with labeling context.

    Returns None when the queue is exhausted.
    """
    top = session.queue.peek(session.state.is_labeled)
    if top is None:
        return None
    tag, score = top
    g = session.graph
    j = g.tag_index(tag)

    pos_cooc = 0
    if j is not None:
        pos_idx = {g.tag_index(p) for p in session.state.positives if g.has_tag(p)}
        for u in session.sub.tag_active_lefts(j):
            tags_u = g.left_tags[g.left_indptr[u]:g.left_indptr[u + 1]]
            if any(int(t) in pos_idx for t in tags_u):
                pos_cooc += 1

    samples = []
    if session.corpus is not None:
        for t in session.corpus.in_day_range(g.day_lo, g.day_hi):
            if tag in t.hashtags:
                samples.append(t.text)
                if len(samples) == 5:
                    break

    return Suggestion(
        hashtag=tag,
        score=score,
        frequency=g.tag_frequency(tag),
        positive_cooccurrence=pos_cooc,
        sample_tweets=samples,
    )


def apply_label(session: ActiveSession, tag: str, positive: bool,
                strict: bool = False) -> HistoryEntry:
    """Label a candidate outside the budgeted loop (interactive sessions).

    The hashtag must be an unlabeled enqueued candidate; in strict mode it
    must be the current top suggestion.
    """
    state = session.state
    if state.is_labeled(tag):
        raise SelectionError(f"hashtag {tag!r} already labeled {state.label_of(tag)}")
    if not session.queue.enqueued(tag):
        raise SelectionError(f"hashtag {tag!r} is not a candidate")
    if strict:
        top = session.queue.peek(state.is_labeled)
        if top is None or top[0] != tag:
            raise SelectionError("strict mode requires labeling the current suggestion")
    score = session.queue.best_score(tag)
    session.rounds += 1
    entry = state.apply(tag, positive, round_no=session.rounds, day=session.day, score=score)
    session.scorer.notify_label(tag, positive)
    if positive:
        _push_neighbors(session, tag)
    return entry
