"""Weighted bipartite entity-hashtag graphs over a corpus day slice.

Left nodes are users (or tweets), right nodes are hashtags. Adjacency is kept
in CSR form in both directions so seed expansion and scoring stay linear in
the number of edges.
"""

from dataclasses import dataclass, field
from collections import Counter

import numpy as np

from . import _kernels
from .corpus import Corpus

GRAPH_KINDS = ("user_hashtag", "tweet_hashtag")


@dataclass(eq=False)
class BipartiteGraph:
    kind: str
    day_lo: int
    day_hi: int
    left_ids: tuple[str, ...]
    tags: tuple[str, ...]
    tag_indptr: np.ndarray
    tag_lefts: np.ndarray
    tag_weights: np.ndarray
    left_indptr: np.ndarray
    left_tags: np.ndarray
    left_weights: np.ndarray
    _tag_index: dict = field(repr=False, default_factory=dict)
    _left_index: dict = field(repr=False, default_factory=dict)

    def __post_init__(self):
        self._tag_index = {t: i for i, t in enumerate(self.tags)}
        self._left_index = {u: i for i, u in enumerate(self.left_ids)}

    @property
    def n_lefts(self) -> int:
        return len(self.left_ids)

    @property
    def n_tags(self) -> int:
        return len(self.tags)

    @property
    def n_edges(self) -> int:
        return len(self.tag_lefts)

    def tag_index(self, tag: str):
        return self._tag_index.get(tag)

    def has_tag(self, tag: str) -> bool:
        return tag in self._tag_index

    def degree_of_tag(self, tag: str) -> int:
        """Distinct left nodes adjacent to the hashtag."""
        j = self._tag_index.get(tag)
        if j is None:
            return 0
        return int(self.tag_indptr[j + 1] - self.tag_indptr[j])

    def tag_frequency(self, tag: str) -> int:
        """Total occurrence count of the hashtag in the slice."""
        j = self._tag_index.get(tag)
        if j is None:
            return 0
        lo, hi = self.tag_indptr[j], self.tag_indptr[j + 1]
        return int(self.tag_weights[lo:hi].sum())

    def edges(self):
        """Yield (left_id, hashtag, weight) sorted by left then hashtag."""
        for u in range(self.n_lefts):
            for e in range(self.left_indptr[u], self.left_indptr[u + 1]):
                yield self.left_ids[u], self.tags[self.left_tags[e]], int(self.left_weights[e])

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("kind,left_id,hashtag,weight\n")
            for left_id, tag, w in self.edges():
                fh.write(f"{self.kind},{left_id},{tag},{w}\n")


def build_graph(corpus: Corpus, day_range=None, kind: str = "user_hashtag") -> BipartiteGraph:
    """Aggregate hashtag occurrence counts into a bipartite graph.

    Weight(left, tag) is the number of occurrences of the tag in the left
    entity's tweets within the inclusive day range (duplicates within one
    tweet count). Nodes without edges are omitted.
    """
    if kind not in GRAPH_KINDS:
        raise ValueError(f"unknown graph kind {kind!r}")
    if day_range is None:
        day_lo, day_hi = corpus.day_bounds() if corpus.days else (0, 0)
    else:
        day_lo, day_hi = day_range
    if day_lo > day_hi:
        raise ValueError("empty day range")

    counts = Counter()
    for t in corpus.in_day_range(day_lo, day_hi):
        left = t.user_id if kind == "user_hashtag" else t.tweet_id
        for tag in t.hashtags:
            counts[(left, tag)] += 1

    left_ids = tuple(sorted({left for left, _ in counts}))
    tags = tuple(sorted({tag for _, tag in counts}))
    left_index = {u: i for i, u in enumerate(left_ids)}
    tag_index = {t: i for i, t in enumerate(tags)}

    triples = sorted(
        (tag_index[tag], left_index[left], w) for (left, tag), w in counts.items()
    )
    n_edges = len(triples)
    tag_lefts = np.zeros(n_edges, dtype=np.int32)
    tag_weights = np.zeros(n_edges, dtype=np.int64)
    tag_indptr = np.zeros(len(tags) + 1, dtype=np.int64)
    for ti, li, w in triples:
        tag_indptr[ti + 1] += 1
    np.cumsum(tag_indptr, out=tag_indptr)
    for e, (ti, li, w) in enumerate(triples):
        tag_lefts[e] = li
        tag_weights[e] = w

    by_left = sorted((li, ti, w) for ti, li, w in triples)
    left_tags = np.zeros(n_edges, dtype=np.int32)
    left_weights = np.zeros(n_edges, dtype=np.int64)
    left_indptr = np.zeros(len(left_ids) + 1, dtype=np.int64)
    for li, ti, w in by_left:
        left_indptr[li + 1] += 1
    np.cumsum(left_indptr, out=left_indptr)
    for e, (li, ti, w) in enumerate(by_left):
        left_tags[e] = ti
        left_weights[e] = w

    return BipartiteGraph(
        kind=kind,
        day_lo=day_lo,
        day_hi=day_hi,
        left_ids=left_ids,
        tags=tags,
        tag_indptr=tag_indptr,
        tag_lefts=tag_lefts,
        tag_weights=tag_weights,
        left_indptr=left_indptr,
        left_tags=left_tags,
        left_weights=left_weights,
    )


@dataclass(eq=False)
class SeedSubgraph:
    """Seed-expanded edge subset of a parent graph.

    The expanded edge set contains exactly the edges whose left node touches
    a seed hashtag, so it is represented as an active-left mask over the
    parent; edge views are materialized on demand.
    """

    parent: BipartiteGraph
    seeds: frozenset
    active_left: np.ndarray
    expanded_tag_indices: np.ndarray
    expanded_hashtags: frozenset

    @property
    def active_count(self) -> int:
        return int(self.active_left.sum())

    def seed_edges(self) -> set:
        g = self.parent
        out = set()
        for s in self.seeds:
            j = g.tag_index(s)
            if j is None:
                continue
            for e in range(g.tag_indptr[j], g.tag_indptr[j + 1]):
                out.add((g.left_ids[g.tag_lefts[e]], s, int(g.tag_weights[e])))
        return out

    def expanded_edges(self) -> set:
        g = self.parent
        out = set()
        for u in np.flatnonzero(self.active_left):
            for e in range(g.left_indptr[u], g.left_indptr[u + 1]):
                out.add((g.left_ids[u], g.tags[g.left_tags[e]], int(g.left_weights[e])))
        return out

    def tag_active_lefts(self, j: int) -> np.ndarray:
        """Active left nodes adjacent to tag index j."""
        g = self.parent
        lefts = g.tag_lefts[g.tag_indptr[j]:g.tag_indptr[j + 1]]
        return lefts[self.active_left[lefts] != 0]

    def one_hop_tag_indices(self, j: int) -> np.ndarray:
        """Tags sharing an active left node with tag index j, excluding j."""
        g = self.parent
        lefts = self.tag_active_lefts(j)
        if len(lefts) == 0:
            return np.zeros(0, dtype=np.int64)
        chunks = [g.left_tags[g.left_indptr[u]:g.left_indptr[u + 1]] for u in lefts]
        tags = np.unique(np.concatenate(chunks)).astype(np.int64)
        return tags[tags != j]


def expand_seed(graph: BipartiteGraph, seeds) -> SeedSubgraph:
    """One-hop expansion: seed edges, then every edge of a touched left node.

    Seeds absent from the graph contribute nothing. Empty seeds give an
    empty subgraph.
    """
    seeds = frozenset(seeds)
    active = np.zeros(graph.n_lefts, dtype=np.uint8)
    for s in sorted(seeds):
        j = graph.tag_index(s)
        if j is None:
            continue
        active[graph.tag_lefts[graph.tag_indptr[j]:graph.tag_indptr[j + 1]]] = 1

    lefts = np.flatnonzero(active)
    if len(lefts) == 0:
        expanded_idx = np.zeros(0, dtype=np.int64)
    else:
        chunks = [
            graph.left_tags[graph.left_indptr[u]:graph.left_indptr[u + 1]] for u in lefts
        ]
        expanded_idx = np.unique(np.concatenate(chunks)).astype(np.int64)
    names = frozenset(graph.tags[j] for j in expanded_idx)
    return SeedSubgraph(
        parent=graph,
        seeds=seeds,
        active_left=active,
        expanded_tag_indices=expanded_idx,
        expanded_hashtags=names,
    )


def full_subgraph(graph: BipartiteGraph) -> SeedSubgraph:
    """The whole graph viewed as a SeedSubgraph (every left node active)."""
    return SeedSubgraph(
        parent=graph,
        seeds=frozenset(),
        active_left=np.ones(graph.n_lefts, dtype=np.uint8),
        expanded_tag_indices=np.arange(graph.n_tags, dtype=np.int64),
        expanded_hashtags=frozenset(graph.tags),
    )


def project_degree(graph: BipartiteGraph, c: str, within: SeedSubgraph = None) -> int:
    """Degree of c in the unipartite hashtag projection of the edge subset.

    Counts distinct hashtags v != c sharing at least one left node with c.
    """
    j = graph.tag_index(c)
    if j is None:
        return 0
    sub = within if within is not None else full_subgraph(graph)
    out = _kernels.cooccurrence_degrees(
        np.array([j], dtype=np.int64),
        graph.tag_indptr,
        graph.tag_lefts,
        graph.left_indptr,
        graph.left_tags,
        sub.active_left,
    )
    return int(out[0])
