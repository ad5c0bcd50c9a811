/** Pure projections: UI state is the last server response plus in-flight
 * optimistic marks. Nothing here filters or re-ranks items. */

import type { RecommendationItem, SessionPayload, TagLists } from './api.js';

export const SCORE_LEGEND: Record<number, string> = {
  0: 'does not interest',
  1: 'a little interest',
  2: 'interests',
  3: 'much interest'
};

export interface RowState {
  item: RecommendationItem;
  selectedScore: number | null;
  saved: boolean;
  pending: boolean;
  failed: boolean;
}

export interface ChipRows {
  relevant: string[];
  irrelevant: string[];
}

export interface AppState {
  userId: string;
  rows: RowState[];
  chips: ChipRows;
}

export function rowsFromPayload(payload: SessionPayload): RowState[] {
  return payload.items.map((item) => ({
    item,
    selectedScore: null,
    saved: false,
    pending: false,
    failed: false
  }));
}

/** Chips mirror the latest server response; a tag sits in at most one row. */
export function chipRowsFrom(lists: TagLists): ChipRows {
  const irrelevant = [...new Set(lists.irrelevant_tags)].sort();
  const taken = new Set(irrelevant);
  const relevant = [...new Set(lists.relevant_tags.map((t) => t.tag))]
    .filter((t) => !taken.has(t))
    .sort();
  return { relevant, irrelevant };
}

export function stateFromPayload(payload: SessionPayload): AppState {
  return {
    userId: payload.user_id,
    rows: rowsFromPayload(payload),
    chips: chipRowsFrom(payload)
  };
}

function updateRow(
  rows: RowState[],
  itemId: string,
  itemKind: string,
  patch: Partial<RowState>
): RowState[] {
  return rows.map((row) =>
    row.item.item_id === itemId && row.item.item_kind === itemKind ? { ...row, ...patch } : row
  );
}

export function markPending(state: AppState, itemId: string, itemKind: string, score: number): AppState {
  return {
    ...state,
    rows: updateRow(state.rows, itemId, itemKind, {
      selectedScore: score,
      pending: true,
      saved: false,
      failed: false
    })
  };
}

export function markSaved(state: AppState, itemId: string, itemKind: string, lists: TagLists): AppState {
  return {
    ...state,
    chips: chipRowsFrom(lists),
    rows: updateRow(state.rows, itemId, itemKind, { pending: false, saved: true, failed: false })
  };
}

/** Network failure: the optimistic mark reverts and the row offers a retry. */
export function revertRow(state: AppState, itemId: string, itemKind: string): AppState {
  return {
    ...state,
    rows: updateRow(state.rows, itemId, itemKind, {
      selectedScore: null,
      pending: false,
      saved: false,
      failed: true
    })
  };
}

export function withChips(state: AppState, lists: TagLists): AppState {
  return { ...state, chips: chipRowsFrom(lists) };
}
