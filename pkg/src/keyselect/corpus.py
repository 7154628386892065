"""Tweet corpora: loading, normalization, day partitioning, and synthesis.

A corpus is an immutable list of tweets with pre-extracted hashtags. Days are
integer indices; when timestamps are given, the day is the UTC calendar-day
offset from the earliest tweet in the file.
"""

import json
import re
import unicodedata
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .errors import CorpusError

_HASHTAG_RE = re.compile(r"#([^\s#]+)")


def normalize_hashtag(tag: str) -> str:
    """Normalize one hashtag token; idempotent.

    Strips leading '#', folds em-dashes to en-dashes, lowercases, and strips
    trailing punctuation. May return an empty string for all-punctuation
    input; callers drop empties.
    """
    tag = tag.lstrip("#")
    tag = tag.replace("—", "–")
    tag = tag.lower()
    while tag and unicodedata.category(tag[-1]).startswith("P"):
        tag = tag[:-1]
    return tag


def extract_hashtags(text: str) -> list[str]:
    """All normalized hashtags of a text, in order, duplicates preserved."""
    out = []
    for raw in _HASHTAG_RE.findall(text):
        tag = normalize_hashtag(raw)
        if tag:
            out.append(tag)
    return out


@dataclass(frozen=True)
class Tweet:
    tweet_id: str
    user_id: str
    day: int
    text: str
    hashtags: tuple[str, ...]
    is_retweet: bool = False


@dataclass(frozen=True)
class Corpus:
    tweets: tuple[Tweet, ...]
    days: tuple[int, ...]

    @classmethod
    def from_tweets(cls, tweets) -> "Corpus":
        tweets = tuple(tweets)
        ids = set()
        for t in tweets:
            if t.tweet_id in ids:
                raise CorpusError(f"duplicate tweet_id {t.tweet_id!r}")
            ids.add(t.tweet_id)
        days = tuple(sorted({t.day for t in tweets}))
        return cls(tweets=tweets, days=days)

    def user_ids(self) -> set[str]:
        return {t.user_id for t in self.tweets}

    def vocabulary(self) -> set[str]:
        return {h for t in self.tweets for h in t.hashtags}

    def in_day_range(self, day_lo: int, day_hi: int) -> list[Tweet]:
        return [t for t in self.tweets if day_lo <= t.day <= day_hi]

    def day_bounds(self) -> tuple[int, int]:
        if not self.days:
            raise CorpusError("empty corpus has no day range")
        return self.days[0], self.days[-1]


@dataclass
class LoadResult:
    corpus: Corpus
    loaded: int
    skipped: int
    duplicates: int
    errors: list[str] = field(default_factory=list)


def _utc_date(dt: datetime):
    if dt.tzinfo is not None:
        dt = dt.astimezone(timezone.utc)
    return dt.date()


def _parse_created_at(value: str) -> datetime:
    return datetime.fromisoformat(value.replace("Z", "+00:00"))


def load_jsonl(path, strict: bool = False) -> LoadResult:
    """Load a JSONL corpus file.

    Each line needs tweet_id, user_id, text, and either an integer day or an
    ISO-8601 created_at. Malformed lines abort in strict mode and are skipped
    (with a recorded error) in lenient mode. Duplicate tweet_ids keep the
    first occurrence.
    """
    rows = []
    errors = []

    def fail(line_no, msg):
        full = f"line {line_no}: {msg}"
        if strict:
            raise CorpusError(f"{path}: {full}")
        errors.append(full)

    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                fail(line_no, f"invalid JSON ({exc.msg})")
                continue
            if not isinstance(obj, dict):
                fail(line_no, "not a JSON object")
                continue
            missing = [k for k in ("tweet_id", "user_id", "text") if k not in obj]
            if missing:
                fail(line_no, f"missing fields {missing}")
                continue
            if "day" not in obj and "created_at" not in obj:
                fail(line_no, "needs day or created_at")
                continue
            try:
                tweet_id = str(obj["tweet_id"])
                user_id = str(obj["user_id"])
                text = obj["text"]
                if not isinstance(text, str):
                    raise ValueError("text must be a string")
                is_retweet = bool(obj.get("is_retweet", False))
                if "day" in obj:
                    day = int(obj["day"])
                    if day < 0:
                        raise ValueError("day must be >= 0")
                    stamp = None
                else:
                    stamp = _parse_created_at(str(obj["created_at"]))
                    day = None
            except (ValueError, TypeError) as exc:
                fail(line_no, str(exc))
                continue
            rows.append((tweet_id, user_id, day, stamp, text, is_retweet))

    stamped = [r[3] for r in rows if r[3] is not None]
    base_date = min(_utc_date(s) for s in stamped) if stamped else None

    tweets = []
    seen = set()
    duplicates = 0
    for tweet_id, user_id, day, stamp, text, is_retweet in rows:
        if tweet_id in seen:
            duplicates += 1
            continue
        seen.add(tweet_id)
        if day is None:
            day = (_utc_date(stamp) - base_date).days
        tweets.append(Tweet(
            tweet_id=tweet_id,
            user_id=user_id,
            day=day,
            text=text,
            hashtags=tuple(extract_hashtags(text)),
            is_retweet=is_retweet,
        ))
    corpus = Corpus.from_tweets(tweets)
    return LoadResult(
        corpus=corpus,
        loaded=len(tweets),
        skipped=len(errors),
        duplicates=duplicates,
        errors=errors,
    )


def save_jsonl(corpus: Corpus, path) -> None:
    """Serialize a corpus to JSONL with explicit day fields."""
    with open(path, "w", encoding="utf-8") as fh:
        for t in corpus.tweets:
            obj = {
                "tweet_id": t.tweet_id,
                "user_id": t.user_id,
                "day": t.day,
                "text": t.text,
                "is_retweet": t.is_retweet,
            }
            fh.write(json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n")


@dataclass(frozen=True)
class SyntheticSpec:
    num_topics: int = 2
    hashtags_per_topic: int = 15
    background_hashtags: int = 20
    num_users: int = 200
    tweets_per_user_per_day: float = 1.0
    num_days: int = 10
    homophily: float = 0.9
    hashtags_per_tweet: int = 2
    rng_seed: int = 0

    def __post_init__(self):
        checks = [
            (self.num_topics >= 1, "num_topics must be >= 1"),
            (self.hashtags_per_topic >= 1, "hashtags_per_topic must be >= 1"),
            (self.background_hashtags >= 0, "background_hashtags must be >= 0"),
            (self.num_users >= 1, "num_users must be >= 1"),
            (self.tweets_per_user_per_day > 0, "tweets_per_user_per_day must be > 0"),
            (self.num_days >= 1, "num_days must be >= 1"),
            (0.0 <= self.homophily <= 1.0, "homophily must be in [0, 1]"),
            (self.hashtags_per_tweet >= 1, "hashtags_per_tweet must be >= 1"),
            (0 <= self.rng_seed < 2 ** 64, "rng_seed must be a 64-bit unsigned integer"),
        ]
        bad = [msg for ok, msg in checks if not ok]
        if bad:
            raise ValueError("; ".join(bad))


def topic_hashtags(spec: SyntheticSpec, topic: int) -> list[str]:
    return [f"t{topic:02d}h{i:02d}" for i in range(spec.hashtags_per_topic)]


def generate_synthetic(spec: SyntheticSpec):
    """Generate a planted-topic corpus plus one oracle set per topic.

    Each user gets a home topic; each hashtag draw comes from the home
    topic's tags with probability `homophily`, else uniformly from the full
    vocabulary. Deterministic for a fixed rng_seed.
    """
    from .eval import OracleSet

    topics = [topic_hashtags(spec, k) for k in range(spec.num_topics)]
    background = [f"bg{i:02d}" for i in range(spec.background_hashtags)]
    all_tags = [t for tags in topics for t in tags] + background

    rng = np.random.default_rng(spec.rng_seed)
    home = rng.integers(0, spec.num_topics, size=spec.num_users)

    tweets = []
    tid = 0
    for day in range(spec.num_days):
        for u in range(spec.num_users):
            home_tags = topics[home[u]]
            n_tweets = rng.poisson(spec.tweets_per_user_per_day)
            for _ in range(n_tweets):
                tags = []
                for _ in range(spec.hashtags_per_tweet):
                    if rng.random() < spec.homophily:
                        tags.append(home_tags[rng.integers(len(home_tags))])
                    else:
                        tags.append(all_tags[rng.integers(len(all_tags))])
                text = " ".join("#" + t for t in tags)
                tweets.append(Tweet(
                    tweet_id=f"s{tid:07d}",
                    user_id=f"u{u:04d}",
                    day=day,
                    text=text,
                    hashtags=tuple(tags),
                ))
                tid += 1

    oracles = [
        OracleSet(topic_name=f"topic{k}", keywords=frozenset(topics[k]))
        for k in range(spec.num_topics)
    ]
    return Corpus.from_tweets(tweets), oracles
