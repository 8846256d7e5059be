/** Typed client for the dive HTTP API. All reasoning stays server-side;
 * this module only moves bytes. */

import type {
  ConfidenceMap,
  DocumentCreated,
  FixtureLoaded,
  IsolationView,
  Policy,
  PolicyAck,
  Session,
  WhatIfState,
} from './types.js';

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class DiveApi {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { 'Content-Type': 'application/json' };
      init.body = typeof body === 'string' ? body : JSON.stringify(body);
    }
    const resp = await this.fetchFn(this.baseUrl + path, init);
    if (resp.status === 204) {
      return undefined as T;
    }
    const payload = await resp.json().catch(() => ({}));
    if (!resp.ok) {
      throw new ApiError(
        resp.status,
        typeof payload.code === 'string' ? payload.code : 'Error',
        typeof payload.message === 'string' ? payload.message : `HTTP ${resp.status}`,
      );
    }
    return payload as T;
  }

  postDocument(body: string): Promise<DocumentCreated> {
    return this.request('POST', '/documents', body);
  }

  loadDemoFixture(): Promise<FixtureLoaded> {
    return this.request('POST', '/fixtures/lady-ada');
  }

  createSession(documentId: string, targets: string[]): Promise<Session> {
    return this.request('POST', '/sessions', { documentId, targets });
  }

  getSession(sessionId: string): Promise<Session> {
    return this.request('GET', `/sessions/${encodeURIComponent(sessionId)}`);
  }

  isolate(sessionId: string, element: string): Promise<IsolationView> {
    const query = new URLSearchParams({ element }).toString();
    return this.request('GET', `/sessions/${encodeURIComponent(sessionId)}/isolate?${query}`);
  }

  putRefutations(sessionId: string, disabled: string[], version: number): Promise<WhatIfState> {
    return this.request('PUT', `/sessions/${encodeURIComponent(sessionId)}/refutations`, {
      disabled,
      version,
    });
  }

  putPolicy(sessionId: string, policy: Policy, version: number): Promise<PolicyAck> {
    return this.request('PUT', `/sessions/${encodeURIComponent(sessionId)}/policy`, {
      ...policy,
      version,
    });
  }

  getConfidence(sessionId: string): Promise<ConfidenceMap> {
    return this.request('GET', `/sessions/${encodeURIComponent(sessionId)}/confidence`);
  }

  deleteSession(sessionId: string): Promise<void> {
    return this.request('DELETE', `/sessions/${encodeURIComponent(sessionId)}`);
  }
}
