/** DOM construction from app state. All data lands via textContent. */

import type { AppState, ChipRows, RowState } from './state.js';
import { SCORE_LEGEND } from './state.js';

export interface Handlers {
  onRate(itemId: string, itemKind: string, score: number): void;
  onMoveChip(tag: string, direction: 'to_irrelevant' | 'to_relevant'): void;
}

export function renderFatal(root: HTMLElement, message: string): void {
  root.replaceChildren();
  const box = root.ownerDocument.createElement('p');
  box.className = 'fatal';
  box.textContent = message;
  root.append(box);
}

function renderLegend(doc: Document): HTMLElement {
  const legend = doc.createElement('p');
  legend.className = 'legend';
  legend.textContent = Object.entries(SCORE_LEGEND)
    .map(([score, label]) => `${score} = ${label}`)
    .join('  ·  ');
  return legend;
}

function renderRow(doc: Document, row: RowState, handlers: Handlers): HTMLElement {
  const li = doc.createElement('li');
  li.className = 'rec-row';
  li.dataset.itemId = row.item.item_id;
  li.dataset.itemKind = row.item.item_kind;

  const badge = doc.createElement('span');
  badge.className = `badge badge-${row.item.item_kind}`;
  badge.textContent = row.item.item_kind;
  li.append(badge);

  if (row.item.item_kind === 'document' && row.item.detail_url) {
    const link = doc.createElement('a');
    link.className = 'title';
    link.href = row.item.detail_url;
    link.target = '_blank';
    link.rel = 'noopener';
    link.textContent = row.item.title;
    li.append(link);
  } else {
    const title = doc.createElement('span');
    title.className = 'title';
    title.textContent = row.item.title;
    li.append(title);
  }

  const controls = doc.createElement('span');
  controls.className = 'rating';
  for (const score of [0, 1, 2, 3]) {
    const button = doc.createElement('button');
    button.type = 'button';
    button.textContent = String(score);
    button.title = SCORE_LEGEND[score] ?? '';
    button.dataset.score = String(score);
    if (row.selectedScore === score) {
      button.classList.add('selected');
    }
    button.addEventListener('click', () =>
      handlers.onRate(row.item.item_id, row.item.item_kind, score)
    );
    controls.append(button);
  }
  li.append(controls);

  const status = doc.createElement('span');
  status.className = 'status';
  if (row.pending) {
    status.textContent = 'saving…';
  } else if (row.saved) {
    status.textContent = 'saved';
    status.classList.add('saved');
  } else if (row.failed) {
    status.textContent = 'failed – tap a score to retry';
    status.classList.add('failed');
  }
  li.append(status);
  return li;
}

function renderChipRow(
  doc: Document,
  label: string,
  tags: string[],
  direction: 'to_irrelevant' | 'to_relevant',
  cssClass: string,
  handlers: Handlers
): HTMLElement {
  const wrap = doc.createElement('div');
  wrap.className = `chip-row ${cssClass}`;
  const heading = doc.createElement('h2');
  heading.textContent = label;
  wrap.append(heading);
  const list = doc.createElement('div');
  list.className = 'chips';
  for (const tag of tags) {
    const chip = doc.createElement('button');
    chip.type = 'button';
    chip.className = 'chip';
    chip.textContent = tag;
    chip.title = direction === 'to_irrelevant' ? 'move to irrelevant' : 'move to relevant';
    chip.addEventListener('click', () => handlers.onMoveChip(tag, direction));
    list.append(chip);
  }
  wrap.append(list);
  return wrap;
}

export function renderChips(doc: Document, chips: ChipRows, handlers: Handlers): HTMLElement {
  const section = doc.createElement('section');
  section.className = 'tag-lists';
  section.append(
    renderChipRow(doc, 'Relevant tags', chips.relevant, 'to_irrelevant', 'relevant', handlers),
    renderChipRow(doc, 'Irrelevant tags', chips.irrelevant, 'to_relevant', 'irrelevant', handlers)
  );
  return section;
}

export function renderApp(root: HTMLElement, state: AppState, handlers: Handlers): void {
  const doc = root.ownerDocument;
  root.replaceChildren();
  root.append(renderChips(doc, state.chips, handlers));
  root.append(renderLegend(doc));

  if (state.rows.length === 0) {
    const empty = doc.createElement('p');
    empty.className = 'empty';
    empty.textContent = 'No recommendations yet — check back after the next cycle.';
    root.append(empty);
    return;
  }
  const list = doc.createElement('ol');
  list.className = 'rec-list';
  for (const row of state.rows) {
    list.append(renderRow(doc, row, handlers));
  }
  root.append(list);
}

export function showToast(root: HTMLElement, message: string): void {
  const doc = root.ownerDocument;
  const toast = doc.createElement('div');
  toast.className = 'toast';
  toast.textContent = message;
  root.append(toast);
  setTimeout(() => toast.remove(), 4000);
}
