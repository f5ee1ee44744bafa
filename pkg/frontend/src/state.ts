/**
 * Session flow state. All view data derives from API responses; the store
 * never reorders or rewrites what the service returned.
 */
import { ApiError, ConvSearchClient, SessionHistory, TurnResponse } from './api.js';

export interface ChatTurnView {
  utterance: string;
  rewritten: string;
  expansion: { term: string; provenance: string }[];
  results: { passage_id: string; doc_id: string; text: string; score: number; rank: number }[];
  degraded: boolean;
}

export interface AppState {
  sessionId: string | null;
  turns: ChatTurnView[];
  pending: boolean;
  showExplain: boolean;
  toast: string | null;
  sessionLost: boolean; // 404 on a known session: offer a new one
}

export function initialState(): AppState {
  return { sessionId: null, turns: [], pending: false, showExplain: true, toast: null, sessionLost: false };
}

export function turnViewFromResponse(utterance: string, response: TurnResponse): ChatTurnView {
  return {
    utterance,
    rewritten: response.rewritten,
    expansion: response.expansion,
    results: response.results,
    degraded: response.degraded,
  };
}

export function viewFromHistory(history: SessionHistory): ChatTurnView[] {
  return history.turns.map((t) => turnViewFromResponse(t.utterance, t.response));
}

type Listener = (state: AppState) => void;

export class SessionStore {
  state: AppState = initialState();
  private listeners: Listener[] = [];

  constructor(private client: ConvSearchClient) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private set(patch: Partial<AppState>): void {
    this.state = { ...this.state, ...patch };
    for (const l of this.listeners) l(this.state);
  }

  async newSession(): Promise<void> {
    try {
      const { session_id } = await this.client.createSession();
      this.set({ sessionId: session_id, turns: [], toast: null, sessionLost: false });
    } catch (err) {
      this.set({ toast: describeError(err) });
    }
  }

  /** One in-flight turn at a time; empty submissions are ignored. */
  async submitTurn(utterance: string): Promise<void> {
    if (!utterance.trim() || this.state.pending || !this.state.sessionId) return;
    this.set({ pending: true, toast: null });
    try {
      const response = await this.client.submitTurn(this.state.sessionId, utterance);
      this.set({
        pending: false,
        turns: [...this.state.turns, turnViewFromResponse(utterance, response)],
      });
    } catch (err) {
      const lost = err instanceof ApiError && err.status === 404;
      this.set({ pending: false, toast: describeError(err), sessionLost: lost });
    }
  }

  /** Rebuild the whole view from the server (page refresh path). */
  async reload(): Promise<void> {
    if (!this.state.sessionId) return;
    try {
      const history = await this.client.getSession(this.state.sessionId);
      this.set({ turns: viewFromHistory(history), toast: null });
    } catch (err) {
      const lost = err instanceof ApiError && err.status === 404;
      this.set({ toast: describeError(err), sessionLost: lost });
    }
  }

  toggleExplain(): void {
    this.set({ showExplain: !this.state.showExplain });
  }

  dismissToast(): void {
    this.set({ toast: null });
  }
}

export function describeError(err: unknown): string {
  if (err instanceof ApiError) {
    if (err.status === 0) return `Cannot reach the search service (${err.message})`;
    if (err.status === 404) return 'Session not found — start a new session';
    return `Service error ${err.status}: ${err.message}`;
  }
  return String(err);
}
