/** Typed client for the convsearch session API. */

export interface ExpansionTerm {
  term: string;
  provenance: 'original' | 'session' | 'query' | 'pqe';
}

export interface PassageResult {
  passage_id: string;
  doc_id: string;
  text: string;
  score: number;
  rank: number;
}

export interface TurnResponse {
  turn_id: string;
  rewritten: string;
  expansion: ExpansionTerm[];
  results: PassageResult[];
  degraded: boolean;
}

export interface TurnRecord {
  utterance: string;
  response: TurnResponse;
}

export interface SessionHistory {
  session_id: string;
  created_at: number;
  turns: TurnRecord[];
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (err) {
    throw new ApiError(0, `network failure: ${err}`);
  }
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body.detail) detail = String(body.detail);
    } catch {
      /* non-json error body */
    }
    throw new ApiError(response.status, detail);
  }
  if (response.status === 204) return undefined as T;
  return response.json() as Promise<T>;
}

export class ConvSearchClient {
  constructor(public baseUrl: string) {}

  createSession(): Promise<{ session_id: string }> {
    return request(`${this.baseUrl}/sessions`, { method: 'POST' });
  }

  submitTurn(sessionId: string, utterance: string): Promise<TurnResponse> {
    return request(`${this.baseUrl}/sessions/${sessionId}/turns`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ utterance }),
    });
  }

  getSession(sessionId: string): Promise<SessionHistory> {
    return request(`${this.baseUrl}/sessions/${sessionId}`);
  }

  deleteSession(sessionId: string): Promise<void> {
    return request(`${this.baseUrl}/sessions/${sessionId}`, { method: 'DELETE' });
  }

  health(): Promise<{ status: string; doc_count: number }> {
    return request(`${this.baseUrl}/healthz`);
  }
}
