import type {
  CandidatePayload,
  Counters,
  ExportBody,
  HistoryEntry,
  NextResponse,
  SessionDetail,
} from './types.js';

export type SessionView = {
  session_id: string;
  corpus_id: string;
  method: string;
  status: 'active' | 'exhausted';
  seeds: string[];
  candidate: CandidatePayload | null;
  counters: Counters;
  history: HistoryEntry[];
};

// The view is a pure function of the last acknowledged server responses;
// the client keeps no label bookkeeping of its own.
export function sessionView(detail: SessionDetail, next: NextResponse, exported: ExportBody): SessionView {
  const candidate: CandidatePayload | null =
    next.status === 'active'
      ? {
          hashtag: next.hashtag,
          score: next.score,
          frequency: next.frequency,
          positive_cooccurrence: next.positive_cooccurrence,
          sample_tweets: next.sample_tweets,
        }
      : null;
  return {
    session_id: detail.session_id,
    corpus_id: detail.corpus_id,
    method: detail.method,
    status: candidate === null ? 'exhausted' : 'active',
    seeds: detail.seeds,
    candidate,
    counters: detail.counters,
    history: exported.history,
  };
}
