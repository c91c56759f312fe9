/**
 * Inline highlight rendering: wraps each match's character interval in
 * <mark> elements with per-distortion colors and a tooltip carrying the
 * N-gram, weight and contribution.
 *
 * Spans from different distortions can cover the same interval (a shared
 * N-gram credits every owner), so rendering is segment-based: the text is
 * cut at every span boundary and each segment gets one nested mark per
 * covering distortion, in a deterministic order.
 */

import type { WireMatch } from './types.js';

const PALETTE = [
  '#ffd54f', '#81d4fa', '#a5d6a7', '#f48fb1', '#ce93d8',
  '#ffab91', '#80cbc4', '#e6ee9c', '#b0bec5', '#fff176',
];

/** Stable color per distortion, assigned by sorted label position. */
export function colorFor(distortion: string, labels: string[]): string {
  const sorted = [...labels].sort();
  const i = sorted.indexOf(distortion);
  return PALETTE[(i >= 0 ? i : 0) % PALETTE.length];
}

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

export interface HighlightOptions {
  /** Only render spans of these distortions (normally the detected ones). */
  detected?: Record<string, boolean>;
  /** Label universe for color assignment; defaults to labels seen in matches. */
  labels?: string[];
  warn?: (message: string) => void;
}

/** Render the source text with match intervals wrapped in layered marks. */
export function renderHighlights(
  text: string,
  matches: WireMatch[],
  options: HighlightOptions = {}
): string {
  const warn = options.warn ?? ((m) => console.warn(m));
  const spans = matches.filter((m) => {
    if (options.detected && !options.detected[m.distortion]) return false;
    if (m.char_start < 0 || m.char_end > text.length || m.char_start >= m.char_end) {
      warn(`highlight span [${m.char_start}, ${m.char_end}) out of bounds, dropped`);
      return false;
    }
    return true;
  });
  if (spans.length === 0) return escapeHtml(text);

  const labels =
    options.labels ?? [...new Set(spans.map((m) => m.distortion))].sort();
  const cuts = new Set([0, text.length]);
  for (const m of spans) {
    cuts.add(m.char_start);
    cuts.add(m.char_end);
  }
  const bounds = [...cuts].sort((a, b) => a - b);

  let html = '';
  for (let i = 0; i < bounds.length - 1; i++) {
    const [lo, hi] = [bounds[i], bounds[i + 1]];
    const covering = spans
      .filter((m) => m.char_start <= lo && hi <= m.char_end)
      .sort((a, b) =>
        a.distortion < b.distortion ? -1 : a.distortion > b.distortion ? 1 : 0
      );
    let segment = escapeHtml(text.slice(lo, hi));
    // innermost mark first so the outermost color order is deterministic
    for (const m of [...covering].reverse()) {
      const tooltip =
        `${m.distortion}: "${m.tokens.join(' ')}" ` +
        `weight ${m.weight} contribution ${m.tokens.length * m.weight}`;
      segment =
        `<mark class="hl" data-distortion="${escapeHtml(m.distortion)}"` +
        ` style="background:${colorFor(m.distortion, labels)}"` +
        ` title="${escapeHtml(tooltip)}">${segment}</mark>`;
    }
    html += segment;
  }
  return html;
}

/** Legend line per detected distortion with its score on the 0..100 scale. */
export function renderLegend(
  scores: Record<string, number>,
  decisions: Record<string, boolean>,
  labels: string[]
): string {
  const detected = labels.filter((d) => decisions[d]);
  if (detected.length === 0) return '<span class="legend-empty">no detections</span>';
  return detected
    .map(
      (d) =>
        `<span class="legend-item" style="background:${colorFor(d, labels)}">` +
        `${escapeHtml(d)} ${(scores[d] * 100).toFixed(1)}</span>`
    )
    .join(' ');
}
