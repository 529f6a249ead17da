import type { SessionState } from './types';

export class ServiceError extends Error {
  constructor(readonly status: number, detail: string) {
    super(`service error ${status}: ${detail}`);
  }
}

async function expectJson<T>(res: Response): Promise<T> {
  if (!res.ok) {
    let detail = res.statusText;
    try {
      const body = (await res.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ServiceError(res.status, detail);
  }
  return (await res.json()) as T;
}

/** Thin typed wrapper over the session protocol. One instance per origin. */
export class ApiClient {
  constructor(
    private readonly base: string = '',
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  createSession(terms: string[], mode = 'interactive', script?: unknown[]): Promise<SessionState> {
    return this.post('/sessions', { terms, mode, script });
  }

  getState(id: string): Promise<SessionState> {
    return this.request(`/sessions/${id}`);
  }

  answerChoice(id: string, requestId: number, answer: unknown): Promise<SessionState> {
    return this.post(`/sessions/${id}/choices`, { request_id: requestId, answer });
  }

  getDiagram(id: string): Promise<unknown> {
    return this.request(`/sessions/${id}/diagram`);
  }

  async getDiagramDot(id: string): Promise<string> {
    const res = await this.fetchFn(`${this.base}/sessions/${id}/diagram`, {
      headers: { Accept: 'text/vnd.graphviz' },
    });
    if (!res.ok) throw new ServiceError(res.status, res.statusText);
    return res.text();
  }

  getTranscript(id: string): Promise<unknown> {
    return this.request(`/sessions/${id}/transcript`);
  }

  async abortSession(id: string): Promise<void> {
    const res = await this.fetchFn(`${this.base}/sessions/${id}`, { method: 'DELETE' });
    if (!res.ok && res.status !== 204) {
      throw new ServiceError(res.status, res.statusText);
    }
  }

  private async request<T>(path: string): Promise<T> {
    return expectJson<T>(await this.fetchFn(this.base + path));
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const res = await this.fetchFn(this.base + path, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    return expectJson<T>(res);
  }
}

/** Poll session state until it leaves the transient statuses. */
export async function waitForProgress(
  api: ApiClient,
  id: string,
  opts: { intervalMs?: number; timeoutMs?: number } = {},
): Promise<SessionState> {
  const interval = opts.intervalMs ?? 150;
  const deadline = Date.now() + (opts.timeoutMs ?? 30_000);
  for (;;) {
    const state = await api.getState(id);
    if (state.status !== 'running') return state;
    if (Date.now() > deadline) throw new Error('timed out waiting for session progress');
    await new Promise((r) => setTimeout(r, interval));
  }
}
