// JSON payload shapes of the labeling service's HTTP API.

export type CorpusInfo = {
  corpus_id: string;
  tweets: number;
  users: number;
  hashtags: number;
  day_range: number[];
};

export type CreateSessionRequest = {
  corpus_id: string;
  seeds: string[];
  method: string;
  rng_seed?: number;
};

export type CreateSessionResponse = {
  session_id: string;
  candidate_count: number;
};

export type CandidatePayload = {
  hashtag: string;
  score: number;
  frequency: number;
  positive_cooccurrence: number;
  sample_tweets: string[];
};

export type NextResponse =
  | { status: 'exhausted' }
  | ({ status: 'active' } & CandidatePayload);

export type LabelValue = 'positive' | 'negative';

export type LabelResponse = {
  accepted: boolean;
  new_candidate_count: number;
  recall_if_oracle_attached: number | null;
};

export type Counters = {
  positives: number;
  negatives: number;
  remaining: number;
};

export type SessionDetail = {
  session_id: string;
  corpus_id: string;
  method: string;
  graph_kind: string;
  day_range: number[];
  status: string;
  created_at: string;
  seeds: string[];
  counters: Counters;
};

export type HistoryEntry = {
  round: number;
  day: number;
  hashtag: string;
  label: LabelValue;
  score: number;
};

export type ExportBody = {
  seeds: string[];
  positives: string[];
  negatives: string[];
  history: HistoryEntry[];
};

export type ApiErrorBody = {
  code: string;
  message: string;
};
