/**
 * Score bars on a 0..100 scale with the DT line overlaid, so the detection
 * rule (score strictly above DT) is visually literal.
 */

import { colorFor, escapeHtml } from './highlights.js';

export function renderScoreBars(
  scores: Record<string, number>,
  decisions: Record<string, boolean>,
  dt: number,
  labels: string[]
): string {
  const rows = labels.map((d) => {
    const pct = (scores[d] ?? 0) * 100;
    const cls = decisions[d] ? 'bar detected' : 'bar';
    return (
      `<div class="score-row" data-distortion="${escapeHtml(d)}">` +
      `<span class="score-label">${escapeHtml(d)}</span>` +
      `<div class="track">` +
      `<div class="${cls}" style="width:${pct.toFixed(2)}%;background:${colorFor(d, labels)}"></div>` +
      `<div class="dt-line" style="left:${dt}%"></div>` +
      `</div>` +
      `<span class="score-value">${pct.toFixed(1)}</span>` +
      `</div>`
    );
  });
  return rows.join('\n');
}
