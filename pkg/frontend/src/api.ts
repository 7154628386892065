import type {
  CorpusInfo,
  CreateSessionRequest,
  CreateSessionResponse,
  NextResponse,
  LabelValue,
  LabelResponse,
  SessionDetail,
  ApiErrorBody,
} from './types.js';

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.status = status;
    this.code = code;
  }
}

async function raise(response: Response): Promise<never> {
  let body: ApiErrorBody | null = null;
  try {
    body = (await response.json()) as ApiErrorBody;
  } catch {
    body = null;
  }
  throw new ApiError(
    response.status,
    body?.code ?? 'http_error',
    body?.message ?? `request failed: ${response.status} ${response.statusText}`,
  );
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  if (!response.ok) {
    await raise(response);
  }
  return (await response.json()) as T;
}

export const api = {
  async listCorpora(): Promise<CorpusInfo[]> {
    const data = await request<{ corpora: CorpusInfo[] }>('/v1/corpora');
    return data.corpora;
  },

  async createSession(req: CreateSessionRequest): Promise<CreateSessionResponse> {
    return request<CreateSessionResponse>('/v1/sessions', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(req),
    });
  },

  async nextCandidate(sessionId: string): Promise<NextResponse> {
    return request<NextResponse>(`/v1/sessions/${encodeURIComponent(sessionId)}/next`);
  },

  async submitLabel(sessionId: string, hashtag: string, label: LabelValue): Promise<LabelResponse> {
    return request<LabelResponse>(`/v1/sessions/${encodeURIComponent(sessionId)}/labels`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ hashtag, label }),
    });
  },

  async getSession(sessionId: string): Promise<SessionDetail> {
    return request<SessionDetail>(`/v1/sessions/${encodeURIComponent(sessionId)}`);
  },

  // Raw body text, not a parsed round trip: the export download must stay
  // byte-equal to what the endpoint served.
  async exportRaw(sessionId: string): Promise<string> {
    const response = await fetch(`/v1/sessions/${encodeURIComponent(sessionId)}/export`);
    if (!response.ok) {
      await raise(response);
    }
    return response.text();
  },
};
