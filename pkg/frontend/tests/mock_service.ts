import type {
  CandidatePayload,
  CorpusInfo,
  CreateSessionRequest,
  ExportBody,
  HistoryEntry,
  LabelValue,
} from '../src/types.js';

// In-memory stand-in for the labeling service: same routes, same JSON
// shapes, same compact serialization, so byte-level comparisons are
// meaningful.

type MockResponse = {
  ok: boolean;
  status: number;
  statusText: string;
  json: () => Promise<unknown>;
  text: () => Promise<string>;
};

type MockSession = {
  session_id: string;
  corpus_id: string;
  method: string;
  seeds: string[];
  positives: Set<string>;
  negatives: Set<string>;
  history: HistoryEntry[];
};

type LoggedRequest = {
  method: string;
  url: string;
  body: unknown;
};

const METHODS = ['keyselect', 'random_walk', 'degree_centrality', 'tfidf', 'word2vec'];

const CORPORA: CorpusInfo[] = [
  { corpus_id: 'broken', tweets: 0, users: 0, hashtags: 0, day_range: [0, 0] },
  { corpus_id: 'demo', tweets: 20, users: 7, hashtags: 9, day_range: [0, 1] },
];

// Queue order: descending score, ties ascending by tag.
const CANDIDATES: CandidatePayload[] = [
  {
    hashtag: 'cough',
    score: 1.0,
    frequency: 9,
    positive_cooccurrence: 5,
    sample_tweets: ['bad #cough with the #flu today', 'this #cough will not quit'],
  },
  {
    hashtag: 'fever',
    score: 1.0,
    frequency: 8,
    positive_cooccurrence: 4,
    sample_tweets: ['running a #fever again', 'day 3 of #flu and #fever'],
  },
  {
    hashtag: 'vax',
    score: 0.75,
    frequency: 6,
    positive_cooccurrence: 3,
    sample_tweets: ['got my #vax appointment'],
  },
  {
    hashtag: 'chills',
    score: 0.5,
    frequency: 4,
    positive_cooccurrence: 2,
    sample_tweets: ['#chills all night'],
  },
  {
    hashtag: 'mask',
    score: 0.25,
    frequency: 3,
    positive_cooccurrence: 1,
    sample_tweets: ['new #mask for the commute'],
  },
  {
    hashtag: 'zzz',
    score: 0.1,
    frequency: 2,
    positive_cooccurrence: 1,
    sample_tweets: ['so tired #zzz'],
  },
];

function normalize(tag: string): string {
  let t = tag.trim().toLowerCase();
  while (t.startsWith('#')) {
    t = t.slice(1);
  }
  return t.replace(/[.,!?;:]+$/, '');
}

function jsonResponse(status: number, payload: unknown): MockResponse {
  const text = JSON.stringify(payload);
  return {
    ok: status >= 200 && status < 300,
    status,
    statusText: String(status),
    json: async () => JSON.parse(text) as unknown,
    text: async () => text,
  };
}

export class MockService {
  requests: LoggedRequest[] = [];
  failNetwork = false;
  lastSessionId = '';
  private sessions = new Map<string, MockSession>();
  private counter = 0;

  fetch = async (input: string | URL, init?: RequestInit): Promise<MockResponse> => {
    const url = String(input);
    const method = (init?.method ?? 'GET').toUpperCase();
    const body = typeof init?.body === 'string' ? (JSON.parse(init.body) as unknown) : null;
    this.requests.push({ method, url, body });
    if (this.failNetwork) {
      throw new TypeError('fetch failed');
    }
    return this.route(method, url, body);
  };

  labelRequests(): LoggedRequest[] {
    return this.requests.filter((r) => r.method === 'POST' && /\/labels$/.test(r.url));
  }

  // Server-side view of an export, serialized exactly as the endpoint does.
  exportText(sessionId: string): string {
    const sess = this.sessions.get(sessionId);
    if (sess === undefined) {
      throw new Error(`no session ${sessionId}`);
    }
    return JSON.stringify(this.buildExport(sess));
  }

  // Apply a label behind the UI's back, as a second tab would.
  labelDirect(sessionId: string, hashtag: string, label: LabelValue): void {
    const sess = this.sessions.get(sessionId);
    if (sess === undefined) {
      throw new Error(`no session ${sessionId}`);
    }
    const outcome = this.applyLabel(sess, normalize(hashtag), label);
    if (outcome !== null) {
      throw new Error(outcome);
    }
  }

  private buildExport(sess: MockSession): ExportBody {
    return {
      seeds: [...sess.seeds].sort(),
      positives: [...sess.positives].sort(),
      negatives: [...sess.negatives].sort(),
      history: sess.history,
    };
  }

  private liveCandidates(sess: MockSession): CandidatePayload[] {
    return CANDIDATES.filter(
      (c) => !sess.seeds.includes(c.hashtag) && !sess.positives.has(c.hashtag) && !sess.negatives.has(c.hashtag),
    );
  }

  private applyLabel(sess: MockSession, tag: string, label: LabelValue): string | null {
    const candidate = this.liveCandidates(sess).find((c) => c.hashtag === tag);
    if (candidate === undefined) {
      return `hashtag '${tag}' is not a candidate`;
    }
    if (label === 'positive') {
      sess.positives.add(tag);
    } else {
      sess.negatives.add(tag);
    }
    sess.history.push({
      round: sess.history.length + 1,
      day: 0,
      hashtag: tag,
      label,
      score: candidate.score,
    });
    return null;
  }

  private route(method: string, url: string, body: unknown): MockResponse {
    const path = url.split('?')[0];

    if (method === 'GET' && path === '/v1/corpora') {
      return jsonResponse(200, { corpora: CORPORA });
    }

    if (method === 'POST' && path === '/v1/sessions') {
      return this.createSession(body as CreateSessionRequest);
    }

    let m = /^\/v1\/sessions\/([^/]+)\/next$/.exec(path);
    if (m !== null && method === 'GET') {
      return this.withSession(m[1], (sess) => {
        const live = this.liveCandidates(sess);
        if (live.length === 0) {
          return jsonResponse(200, { status: 'exhausted' });
        }
        return jsonResponse(200, { status: 'active', ...live[0] });
      });
    }

    m = /^\/v1\/sessions\/([^/]+)\/labels$/.exec(path);
    if (m !== null && method === 'POST') {
      return this.withSession(m[1], (sess) => {
        const req = body as { hashtag: string; label: string };
        if (req.label !== 'positive' && req.label !== 'negative') {
          return jsonResponse(422, {
            code: 'invalid_request',
            message: `label must be positive or negative, got '${req.label}'`,
          });
        }
        const tag = normalize(req.hashtag);
        if (sess.seeds.includes(tag) || sess.positives.has(tag) || sess.negatives.has(tag)) {
          const current = sess.negatives.has(tag) ? 'negative' : 'positive';
          return jsonResponse(409, {
            code: 'conflict',
            message: `hashtag '${tag}' already labeled ${current}`,
          });
        }
        const outcome = this.applyLabel(sess, tag, req.label);
        if (outcome !== null) {
          return jsonResponse(422, { code: 'invalid_request', message: outcome });
        }
        return jsonResponse(200, {
          accepted: true,
          new_candidate_count: this.liveCandidates(sess).length,
          recall_if_oracle_attached: null,
        });
      });
    }

    m = /^\/v1\/sessions\/([^/]+)\/export$/.exec(path);
    if (m !== null && method === 'GET') {
      return this.withSession(m[1], (sess) => jsonResponse(200, this.buildExport(sess)));
    }

    m = /^\/v1\/sessions\/([^/]+)$/.exec(path);
    if (m !== null && method === 'GET') {
      return this.withSession(m[1], (sess) => {
        const remaining = this.liveCandidates(sess).length;
        return jsonResponse(200, {
          session_id: sess.session_id,
          corpus_id: sess.corpus_id,
          method: sess.method,
          graph_kind: 'user_hashtag',
          day_range: [0, 1],
          status: remaining > 0 ? 'active' : 'exhausted',
          created_at: '2026-08-15T00:00:00Z',
          seeds: [...sess.seeds].sort(),
          counters: {
            positives: [...sess.positives].filter((t) => !sess.seeds.includes(t)).length,
            negatives: sess.negatives.size,
            remaining,
          },
        });
      });
    }

    return jsonResponse(404, { code: 'not_found', message: `no route for ${method} ${path}` });
  }

  private createSession(req: CreateSessionRequest): MockResponse {
    if (!CORPORA.some((c) => c.corpus_id === req.corpus_id)) {
      return jsonResponse(404, {
        code: 'not_found',
        message: `corpus '${req.corpus_id}' is not registered`,
      });
    }
    if (req.corpus_id === 'broken') {
      return jsonResponse(422, { code: 'invalid_request', message: "corpus 'broken' has no tweets" });
    }
    if (!METHODS.includes(req.method)) {
      return jsonResponse(422, { code: 'invalid_request', message: `unknown method '${req.method}'` });
    }
    const seeds = [...new Set(req.seeds.map(normalize).filter((t) => t.length > 0))].sort();
    if (seeds.length === 0) {
      return jsonResponse(422, {
        code: 'invalid_request',
        message: 'seeds must contain at least one hashtag',
      });
    }
    this.counter += 1;
    const sess: MockSession = {
      session_id: `mock${String(this.counter).padStart(8, '0')}`,
      corpus_id: req.corpus_id,
      method: req.method,
      seeds,
      positives: new Set(seeds),
      negatives: new Set(),
      history: [],
    };
    this.sessions.set(sess.session_id, sess);
    this.lastSessionId = sess.session_id;
    return jsonResponse(201, {
      session_id: sess.session_id,
      candidate_count: this.liveCandidates(sess).length,
    });
  }

  private withSession(sessionId: string, fn: (sess: MockSession) => MockResponse): MockResponse {
    const sess = this.sessions.get(sessionId);
    if (sess === undefined) {
      return jsonResponse(404, { code: 'not_found', message: `session '${sessionId}' not found` });
    }
    return fn(sess);
  }
}
