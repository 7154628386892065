"""Evaluation: oracle sets, recall/precision/coverage, and the multi-day
multi-budget experiment runner.

The protocol builds one graph per day, carries labels forward, reseeds the
candidate queue from all current positives, spends the day's budget against
a static oracle, and records cumulative metrics with a coverage window that
grows from the first day.
"""

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .corpus import Corpus, normalize_hashtag
from .errors import EvalError, KeyselError
from .graph import BipartiteGraph, build_graph
from .selection import LabelState, Method, StaticOracle, init_session, run_round

CSV_HEADER = "method,budget,day,replicate,recall,precision,tweet_coverage,user_coverage,labels_used"


@dataclass(frozen=True)
class OracleSet:
    """Ground-truth topic keywords; entity sets are derived per window."""

    topic_name: str
    keywords: frozenset

    def __post_init__(self):
        if not self.keywords:
            raise ValueError("oracle keywords must be non-empty")


def load_oracle_file(path, topic_name: str = None) -> OracleSet:
    """One hashtag per line, '#' optional, '//' comment lines skipped."""
    keywords = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("//"):
                continue
            tag = normalize_hashtag(line)
            if tag:
                keywords.add(tag)
    if not keywords:
        raise EvalError(f"{path}: no oracle keywords found")
    name = topic_name if topic_name is not None else Path(path).stem
    return OracleSet(topic_name=name, keywords=frozenset(keywords))


def save_oracle_file(oracle: OracleSet, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"// {oracle.topic_name} planted keywords\n")
        for tag in sorted(oracle.keywords):
            fh.write(tag + "\n")


def filter_daily_presence(oracle: OracleSet, corpus: Corpus, day_lo: int, day_hi: int) -> OracleSet:
    """Keep only keywords appearing at least once on every day of the range."""
    present = {day: set() for day in range(day_lo, day_hi + 1)}
    for t in corpus.in_day_range(day_lo, day_hi):
        present[t.day].update(t.hashtags)
    kept = frozenset(
        k for k in oracle.keywords
        if all(k in present[day] for day in range(day_lo, day_hi + 1))
    )
    if not kept:
        raise EvalError("no oracle keywords survive the daily-presence filter")
    return OracleSet(topic_name=oracle.topic_name, keywords=kept)


def oracle_entities(oracle: OracleSet, corpus: Corpus, day_lo: int, day_hi: int):
    """O_T and O_U: tweets/users in the window mentioning an oracle hashtag."""
    tweets = set()
    users = set()
    for t in corpus.in_day_range(day_lo, day_hi):
        if oracle.keywords.intersection(t.hashtags):
            tweets.add(t.tweet_id)
            users.add(t.user_id)
    return tweets, users


def select_initial_seeds(graph: BipartiteGraph, oracle: OracleSet, n: int) -> frozenset:
    """The n highest-degree oracle keywords on the given graph.

    Degree is the count of distinct incident left nodes; absent keywords
    have degree 0. Ties break by ascending hashtag.
    """
    if not oracle.keywords:
        raise EvalError("oracle is empty")
    ranked = sorted(oracle.keywords, key=lambda k: (-graph.degree_of_tag(k), k))
    return frozenset(ranked[:n])


def recall(labels: LabelState, oracle: OracleSet) -> float:
    """|((L+ \\ seeds) intersect (O \\ seeds))| / |O \\ seeds|."""
    denom = oracle.keywords - labels.seeds
    if not denom:
        raise EvalError("oracle exhausted by seeds")
    num = (labels.positives & oracle.keywords) - labels.seeds
    return len(num) / len(denom)


def precision(labels: LabelState, oracle: OracleSet = None) -> float:
    """|L+ \\ seeds| / |(L+ union L-) \\ seeds|."""
    submitted = (labels.positives | labels.negatives) - labels.seeds
    if not submitted:
        raise EvalError("no labels submitted")
    return len(labels.positives - labels.seeds) / len(submitted)


def coverage(labels: LabelState, corpus: Corpus, day_lo: int, day_hi: int,
             oracle: OracleSet):
    """(t_c, u_c): window tweets/users reached by L+ over the oracle sets.

    Numerators count entities mentioning any positive keyword; no oracle
    filter is applied to them, so the raw ratio is reported unclamped.
    """
    oracle_tweets, oracle_users = oracle_entities(oracle, corpus, day_lo, day_hi)
    if not oracle_tweets or not oracle_users:
        raise EvalError("oracle entity sets are empty in the window")
    pos = labels.positives
    hit_tweets = set()
    hit_users = set()
    for t in corpus.in_day_range(day_lo, day_hi):
        if pos.intersection(t.hashtags):
            hit_tweets.add(t.tweet_id)
            hit_users.add(t.user_id)
    return len(hit_tweets) / len(oracle_tweets), len(hit_users) / len(oracle_users)


@dataclass
class MetricsRecord:
    method: str
    budget: int
    day: int
    replicate: int
    recall: float
    precision: float
    tweet_coverage: float
    user_coverage: float
    labels_used: int

    def __post_init__(self):
        for name in ("recall", "precision", "tweet_coverage", "user_coverage"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")
        if self.labels_used < 0:
            raise ValueError("labels_used must be >= 0")


@dataclass
class ExperimentConfig:
    corpus: Corpus
    oracle: OracleSet
    methods: tuple
    budgets: tuple = (3, 10, 30)
    day_lo: int = None
    day_hi: int = None
    seed_count: int = 10
    replicate_seeds: tuple = (0,)
    daily_oracle_filter: bool = False

    def __post_init__(self):
        if not self.methods:
            raise ValueError("methods must be non-empty")
        self.methods = tuple(self.methods)
        self.budgets = tuple(int(b) for b in self.budgets)
        if not self.budgets or any(b < 1 for b in self.budgets):
            raise ValueError("budgets must be positive integers")
        lo, hi = self.corpus.day_bounds()
        if self.day_lo is None:
            self.day_lo = lo
        if self.day_hi is None:
            self.day_hi = hi
        if not (lo <= self.day_lo <= self.day_hi <= hi):
            raise ValueError(
                f"day range [{self.day_lo}, {self.day_hi}] outside corpus days [{lo}, {hi}]"
            )
        if self.seed_count < 1:
            raise ValueError("seed_count must be >= 1")
        self.replicate_seeds = tuple(int(s) for s in self.replicate_seeds)
        if not self.replicate_seeds:
            raise ValueError("replicate_seeds must be non-empty")


def _run_cell(corpus: Corpus, oracle: OracleSet, seeds: frozenset, method: Method,
              budget: int, replicate: int, replicate_seed: int,
              day_lo: int, day_hi: int) -> list:
    rng = np.random.default_rng(np.random.SeedSequence([replicate_seed, method.rng_seed]))
    state = None
    records = []
    for day in range(day_lo, day_hi + 1):
        try:
            graph = build_graph(corpus, (day, day), kind="user_hashtag")
            session = init_session(
                graph, seeds, method, prior_labels=state, corpus=corpus, day=day, rng=rng,
            )
            run_round(session, StaticOracle(oracle.keywords), budget)
            state = session.state
            r = recall(state, oracle)
            p = precision(state, oracle)
            t_c, u_c = coverage(state, corpus, day_lo, day, oracle)
        except KeyselError as exc:
            raise EvalError(
                f"method={method.name} budget={budget} day={day}: {exc}"
            ) from exc
        records.append(MetricsRecord(
            method=method.name,
            budget=budget,
            day=day,
            replicate=replicate,
            recall=r,
            precision=p,
            tweet_coverage=t_c,
            user_coverage=u_c,
            labels_used=len(state.history),
        ))
    return records


def run_experiment(config: ExperimentConfig, jobs: int = 1) -> list:
    """Run every (method, budget, replicate) cell over the day range.

    Cells are independent; with jobs > 1 they run in separate processes.
    Records come back sorted by (method, budget, replicate, day) so output
    is invariant to execution order.
    """
    oracle = config.oracle
    if config.daily_oracle_filter:
        oracle = filter_daily_presence(oracle, config.corpus, config.day_lo, config.day_hi)

    day1 = build_graph(config.corpus, (config.day_lo, config.day_lo), kind="user_hashtag")
    seeds = select_initial_seeds(day1, oracle, config.seed_count)

    cells = [
        (config.corpus, oracle, seeds, method, budget, rep_idx, rep_seed,
         config.day_lo, config.day_hi)
        for method in config.methods
        for budget in config.budgets
        for rep_idx, rep_seed in enumerate(config.replicate_seeds)
    ]

    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_cell_star, cells))
    else:
        chunks = [_run_cell(*cell) for cell in cells]

    records = [rec for chunk in chunks for rec in chunk]
    records.sort(key=lambda r: (r.method, r.budget, r.replicate, r.day))
    return records


def _run_cell_star(args):
    return _run_cell(*args)


def write_records_csv(records, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in records:
            fh.write(
                f"{r.method},{r.budget},{r.day},{r.replicate},"
                f"{r.recall!r},{r.precision!r},{r.tweet_coverage!r},"
                f"{r.user_coverage!r},{r.labels_used}\n"
            )


def read_records_csv(path) -> list:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise EvalError(f"{path}: unexpected header {header!r}")
        records = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 9:
                raise EvalError(f"{path}: malformed row {line!r}")
            records.append(MetricsRecord(
                method=parts[0], budget=int(parts[1]), day=int(parts[2]),
                replicate=int(parts[3]), recall=float(parts[4]),
                precision=float(parts[5]), tweet_coverage=float(parts[6]),
                user_coverage=float(parts[7]), labels_used=int(parts[8]),
            ))
    return records


def _mean_sd(values) -> tuple:
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean())
    sd = float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
    return mean, sd


def summarize(records) -> dict:
    """Per-(method, budget) final-day means and standard deviations."""
    groups = {}
    for r in records:
        groups.setdefault((r.method, r.budget), []).append(r)
    configurations = []
    for (method, budget) in sorted(groups):
        recs = groups[(method, budget)]
        final_day = max(r.day for r in recs)
        finals = [r for r in recs if r.day == final_day]
        entry = {"method": method, "budget": budget, "final_day": final_day,
                 "replicates": len(finals)}
        for name in ("recall", "precision", "tweet_coverage", "user_coverage"):
            mean, sd = _mean_sd([getattr(r, name) for r in finals])
            entry[name] = {"mean": mean, "sd": sd}
        configurations.append(entry)
    return {"configurations": configurations}


def write_summary_json(records, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summarize(records), fh, indent=2, sort_keys=True)
        fh.write("\n")


def default_jobs() -> int:
    return os.cpu_count() or 1
