"""Active-learning keyword expansion over entity-hashtag co-occurrence graphs."""

__version__ = "0.1.0"

from ._kernels import backend_name
from .corpus import (
    Corpus,
    LoadResult,
    SyntheticSpec,
    Tweet,
    extract_hashtags,
    generate_synthetic,
    load_jsonl,
    normalize_hashtag,
    save_jsonl,
)
from .errors import ConfigError, CorpusError, EvalError, KeyselError, SelectionError, TextError
from .eval import (
    ExperimentConfig,
    MetricsRecord,
    OracleSet,
    coverage,
    load_oracle_file,
    precision,
    recall,
    run_experiment,
    select_initial_seeds,
)
from .graph import BipartiteGraph, SeedSubgraph, build_graph, expand_seed, full_subgraph, project_degree
from .selection import (
    ActiveSession,
    CandidateQueue,
    InteractiveOracle,
    LabelState,
    Method,
    StaticOracle,
    apply_label,
    init_session,
    run_round,
    score_degree_centrality,
    score_keyselect,
    score_random_walk,
    suggest_next,
)
from .text_baselines import (
    EmbeddingModel,
    TokenizedDoc,
    embedding_rank,
    tfidf_rank,
    tfidf_score,
    tokenize,
    train_skipgram,
)

__all__ = [name for name in dir() if not name.startswith("_")]
