/** Thin typed client for the colormap service. */

import type {
  EditResponse,
  ExportDocument,
  FrontResponse,
  OptimizeOverrides,
  PaletteEntry,
  SelectResponse,
  SessionCreated,
} from './types.js';

export class ApiRequestError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    detail: string,
  ) {
    super(detail);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private readonly base: string = '',
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const res = await this.fetchImpl(`${this.base}${path}`, {
      method,
      headers: body === undefined ? undefined : { 'content-type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!res.ok) {
      let code = 'unknown';
      let detail = res.statusText;
      try {
        const err = (await res.json()) as { code?: string; detail?: string };
        code = err.code ?? code;
        detail = err.detail ?? detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiRequestError(res.status, code, detail);
    }
    return (await res.json()) as T;
  }

  createSession(spec: unknown): Promise<SessionCreated> {
    return this.request('POST', '/sessions', { spec });
  }

  optimize(sessionId: string, overrides: OptimizeOverrides = {}): Promise<FrontResponse> {
    return this.request('POST', `/sessions/${sessionId}/optimize`, overrides);
  }

  getFront(sessionId: string): Promise<FrontResponse> {
    return this.request('GET', `/sessions/${sessionId}/front`);
  }

  select(sessionId: string, index: number): Promise<SelectResponse> {
    return this.request('POST', `/sessions/${sessionId}/select`, { index });
  }

  edit(sessionId: string, view: string, key: string, color: string): Promise<EditResponse> {
    return this.request('POST', `/sessions/${sessionId}/edit`, { view, key, color });
  }

  palettes(): Promise<{ palettes: PaletteEntry[] }> {
    return this.request('GET', '/palettes');
  }

  exportDocument(sessionId: string): Promise<ExportDocument> {
    return this.request('GET', `/sessions/${sessionId}/export`);
  }
}
