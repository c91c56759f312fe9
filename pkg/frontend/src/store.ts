/**
 * UI state and the actions behind it. Framework-free observable store:
 * actions mutate a snapshot and notify subscribers, rendering is done by
 * whoever subscribes (the browser bootstrap in main.ts, plain assertions in
 * tests).
 *
 * Recognition is latest-wins: a response is dropped if a newer request for
 * the text box has been issued since. Moving the DT slider never calls the
 * server; decisions are re-derived client-side from the cached scores.
 */

import { ApiClient, ApiError } from './api.js';
import { decideScores } from './decisions.js';
import type { DiffResponse, ModelPage, RecognitionResponse } from './types.js';

export interface BrowserState {
  distortion: string | null;
  filter: string;
  page: number;
  pageSize: number;
}

export interface ViewState {
  text: string;
  result: RecognitionResponse | null;
  dt: number;
  weighted: boolean;
  browser: BrowserState;
  modelPage: ModelPage | null;
  labels: string[];
  editError: string | null;
  diffCount: number;
  undoDepth: number;
}

function countDiff(diff: DiffResponse): number {
  let n = 0;
  for (const group of [diff.added, diff.removed, diff.reweighted]) {
    for (const entries of Object.values(group)) n += entries.length;
  }
  return n;
}

export class AuditStore {
  state: ViewState = {
    text: '',
    result: null,
    dt: 50,
    weighted: true,
    browser: { distortion: null, filter: '', page: 0, pageSize: 100 },
    modelPage: null,
    labels: [],
    editError: null,
    diffCount: 0,
    undoDepth: 0,
  };

  private listeners: Array<(s: ViewState) => void> = [];
  private recognizeSeq = 0;

  constructor(public api: ApiClient) {}

  subscribe(listener: (s: ViewState) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const l of this.listeners) l(this.state);
  }

  /** Decisions at the current slider DT, derived from cached scores. */
  decisions(): Record<string, boolean> {
    if (!this.state.result) return {};
    return decideScores(this.state.result.scores, this.state.dt);
  }

  /** New text in the box: recognize it; stale responses are dropped. */
  async setText(text: string): Promise<void> {
    this.state.text = text;
    const seq = ++this.recognizeSeq;
    if (text.trim() === '') {
      this.state.result = null;
      this.notify();
      return;
    }
    const result = await this.api.recognize(text, this.state.dt, this.state.weighted);
    if (seq !== this.recognizeSeq) return; // superseded by newer input
    this.state.result = result;
    this.notify();
  }

  /** Slider move: client-side re-threshold only, no server round trip. */
  setDt(dt: number): void {
    this.state.dt = dt;
    this.notify();
  }

  async setWeighted(weighted: boolean): Promise<void> {
    this.state.weighted = weighted;
    // weights change the scores themselves, so this one must re-score
    if (this.state.text.trim() !== '') await this.setText(this.state.text);
    else this.notify();
  }

  async loadModelPage(patch: Partial<BrowserState> = {}): Promise<void> {
    this.state.browser = { ...this.state.browser, ...patch };
    const b = this.state.browser;
    const page = await this.api.getModel({
      distortion: b.distortion ?? undefined,
      filter: b.filter || undefined,
      page: b.page,
      pageSize: b.pageSize,
    });
    this.state.modelPage = page;
    this.state.labels = page.labels;
    this.notify();
  }

  /**
   * The what-if loop: apply one dictionary edit, then automatically
   * re-score the current text and refresh the browser page and diff badge.
   */
  async submitEdit(
    distortion: string,
    ngram: string[],
    weight: number | null
  ): Promise<boolean> {
    this.state.editError = null;
    let changed: boolean;
    try {
      const res = await this.api.patchEntry(distortion, ngram, weight);
      changed = res.changed;
      this.state.undoDepth = res.undo_depth;
    } catch (e) {
      if (e instanceof ApiError) {
        this.state.editError = e.message; // 422 etc. surfaced inline
        this.notify();
        return false;
      }
      throw e;
    }
    await this.afterModelChange();
    return changed;
  }

  deleteEntry(distortion: string, ngram: string[]): Promise<boolean> {
    return this.submitEdit(distortion, ngram, null);
  }

  async undo(): Promise<boolean> {
    const res = await this.api.undo();
    this.state.undoDepth = res.undo_depth;
    if (res.undone) await this.afterModelChange();
    return res.undone;
  }

  async refreshDiff(): Promise<void> {
    const diff = await this.api.diff();
    this.state.diffCount = countDiff(diff);
    this.notify();
  }

  private async afterModelChange(): Promise<void> {
    if (this.state.text.trim() !== '') {
      await this.setText(this.state.text); // automatic re-recognize
    }
    if (this.state.modelPage) await this.loadModelPage();
    await this.refreshDiff();
  }
}
