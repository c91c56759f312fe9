/**
 * Thin client for the audit server HTTP API. This is the only place the UI
 * talks to the network; texts go to the configured (loopback) base URL and
 * nowhere else.
 */

import type {
  DiffResponse,
  ModelPage,
  PatchResponse,
  RecognitionResponse,
} from './types.js';

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
    this.name = 'ApiError';
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private fetchFn: FetchLike;

  constructor(public baseUrl: string, fetchFn?: FetchLike) {
    this.fetchFn = fetchFn ?? ((url, init) => globalThis.fetch(url, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(this.baseUrl + path, init);
    if (!res.ok) {
      let detail = res.statusText;
      try {
        const body = await res.json();
        if (body && body.detail !== undefined) detail = JSON.stringify(body.detail);
      } catch {
        // non-JSON error body; keep statusText
      }
      throw new ApiError(res.status, detail);
    }
    return (await res.json()) as T;
  }

  recognize(text: string, dt: number, weighted: boolean): Promise<RecognitionResponse> {
    return this.request('/recognize', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ text, DT: dt, weighted }),
    });
  }

  getModel(opts: {
    distortion?: string;
    filter?: string;
    page?: number;
    pageSize?: number;
  } = {}): Promise<ModelPage> {
    const params = new URLSearchParams();
    if (opts.distortion) params.set('distortion', opts.distortion);
    if (opts.filter) params.set('filter', opts.filter);
    if (opts.page !== undefined) params.set('page', String(opts.page));
    if (opts.pageSize !== undefined) params.set('page_size', String(opts.pageSize));
    const query = params.toString();
    return this.request('/model' + (query ? '?' + query : ''));
  }

  /** Set (weight in (0,1]) or delete (weight null) one dictionary entry. */
  patchEntry(
    distortion: string,
    ngram: string[],
    weight: number | null
  ): Promise<PatchResponse> {
    return this.request('/model/entries', {
      method: 'PATCH',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ distortion, ngram, weight }),
    });
  }

  undo(): Promise<{ undone: boolean; undo_depth: number }> {
    return this.request('/model/undo', { method: 'POST' });
  }

  save(dir?: string): Promise<{ saved_to: string }> {
    return this.request('/model/save', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(dir ? { dir } : {}),
    });
  }

  diff(): Promise<DiffResponse> {
    return this.request('/model/diff');
  }
}
