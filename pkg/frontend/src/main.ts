/** Browser bootstrap: wires the store to the DOM of index.html. */

import { ApiClient } from './api.js';
import { renderHighlights, renderLegend } from './highlights.js';
import { renderScoreBars } from './scorebars.js';
import { AuditStore } from './store.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export function boot(baseUrl = 'http://127.0.0.1:8000'): AuditStore {
  const store = new AuditStore(new ApiClient(baseUrl));

  const textBox = el<HTMLTextAreaElement>('text');
  const dtSlider = el<HTMLInputElement>('dt');
  const dtValue = el<HTMLSpanElement>('dt-value');
  const weightedBox = el<HTMLInputElement>('weighted');
  const bars = el<HTMLDivElement>('score-bars');
  const highlighted = el<HTMLDivElement>('highlighted');
  const legend = el<HTMLDivElement>('legend');
  const browserBody = el<HTMLTableSectionElement>('browser-body');
  const browserFilter = el<HTMLInputElement>('browser-filter');
  const browserLabel = el<HTMLSelectElement>('browser-label');
  const pageInfo = el<HTMLSpanElement>('page-info');
  const diffBadge = el<HTMLSpanElement>('diff-badge');
  const editForm = el<HTMLFormElement>('edit-form');
  const editError = el<HTMLSpanElement>('edit-error');

  store.subscribe((state) => {
    const decisions = store.decisions();
    dtValue.textContent = String(state.dt);
    diffBadge.textContent = state.diffCount ? String(state.diffCount) : '';
    editError.textContent = state.editError ?? '';
    if (state.result) {
      const labels = state.labels.length ? state.labels : Object.keys(state.result.scores);
      bars.innerHTML = renderScoreBars(state.result.scores, decisions, state.dt, labels);
      highlighted.innerHTML = renderHighlights(state.text, state.result.matches, {
        detected: decisions,
        labels,
      });
      legend.innerHTML = renderLegend(state.result.scores, decisions, labels);
    } else {
      bars.innerHTML = '';
      highlighted.textContent = state.text;
      legend.innerHTML = '';
    }
    if (state.modelPage) {
      const p = state.modelPage;
      pageInfo.textContent = `page ${p.page + 1} of ${Math.max(1, Math.ceil(p.total / p.page_size))} (${p.total} entries)`;
      browserBody.innerHTML = p.entries
        .map(
          (e, i) =>
            `<tr><td>${e.distortion}</td><td>${e.ngram.join(' ')}</td>` +
            `<td>${e.weight.toFixed(4)}</td>` +
            `<td><button data-del="${i}">delete</button></td></tr>`
        )
        .join('');
      while (browserLabel.options.length < p.labels.length + 1) {
        const opt = document.createElement('option');
        opt.value = p.labels[browserLabel.options.length - 1];
        opt.textContent = opt.value;
        browserLabel.appendChild(opt);
      }
    }
  });

  let debounce: ReturnType<typeof setTimeout> | undefined;
  textBox.addEventListener('input', () => {
    clearTimeout(debounce);
    debounce = setTimeout(() => void store.setText(textBox.value), 250);
  });
  dtSlider.addEventListener('input', () => store.setDt(Number(dtSlider.value)));
  weightedBox.addEventListener('change', () => void store.setWeighted(weightedBox.checked));
  browserFilter.addEventListener('change', () =>
    void store.loadModelPage({ filter: browserFilter.value, page: 0 })
  );
  browserLabel.addEventListener('change', () =>
    void store.loadModelPage({ distortion: browserLabel.value || null, page: 0 })
  );
  el<HTMLButtonElement>('page-prev').addEventListener('click', () => {
    const page = Math.max(0, store.state.browser.page - 1);
    void store.loadModelPage({ page });
  });
  el<HTMLButtonElement>('page-next').addEventListener('click', () =>
    void store.loadModelPage({ page: store.state.browser.page + 1 })
  );
  browserBody.addEventListener('click', (ev) => {
    const target = ev.target as HTMLElement;
    const idx = target.getAttribute('data-del');
    if (idx !== null && store.state.modelPage) {
      const entry = store.state.modelPage.entries[Number(idx)];
      void store.deleteEntry(entry.distortion, entry.ngram);
    }
  });
  editForm.addEventListener('submit', (ev) => {
    ev.preventDefault();
    const data = new FormData(editForm);
    const weightRaw = String(data.get('weight') ?? '').trim();
    void store.submitEdit(
      String(data.get('distortion') ?? ''),
      String(data.get('ngram') ?? '').split(/\s+/).filter(Boolean),
      weightRaw === '' ? null : Number(weightRaw)
    );
  });
  el<HTMLButtonElement>('undo').addEventListener('click', () => void store.undo());
  el<HTMLButtonElement>('save').addEventListener('click', () => void store.api.save());

  void store.loadModelPage();
  void store.refreshDiff();
  return store;
}
