/** Wire types of the audit server's JSON API. */

export interface WireMatch {
  distortion: string;
  tokens: string[];
  char_start: number;
  char_end: number;
  weight: number;
}

export interface RecognitionResponse {
  scores: Record<string, number>; // normalized, 0..1
  decisions: Record<string, boolean>; // at the DT sent with the request
  matches: WireMatch[];
  length: number;
}

export interface ModelEntry {
  distortion: string;
  ngram: string[];
  weight: number;
}

export interface ModelPage {
  labels: string[];
  nm: number;
  total: number;
  page: number;
  page_size: number;
  entries: ModelEntry[];
}

export interface PatchResponse {
  changed: boolean;
  undo_depth: number;
}

export interface DiffEntry {
  ngram: string[];
  weight?: number;
  from?: number;
  to?: number;
}

export interface DiffResponse {
  added: Record<string, DiffEntry[]>;
  removed: Record<string, DiffEntry[]>;
  reweighted: Record<string, DiffEntry[]>;
  empty: boolean;
}
