/** Controller: wires the API round-trips to state transitions and rendering.
 * A hard refresh always converges to server truth; optimistic marks only
 * bridge the gap until the response lands. */

import { ApiError, fetchRecommendations, reallocateTag, submitRating } from './api.js';
import type { Direction, ItemKind } from './api.js';
import { renderApp, renderFatal, showToast } from './render.js';
import type { Handlers } from './render.js';
import { markPending, markSaved, revertRow, stateFromPayload, withChips } from './state.js';
import type { AppState } from './state.js';

export class FeedbackApp {
  private state: AppState | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly base: string,
    private readonly token: string
  ) {}

  async load(): Promise<void> {
    try {
      const payload = await fetchRecommendations(this.base, this.token);
      this.state = stateFromPayload(payload);
      this.paint();
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        renderFatal(this.root, 'This feedback link is not valid.');
      } else if (error instanceof ApiError && error.status === 410) {
        renderFatal(this.root, 'This feedback link has expired.');
      } else {
        renderFatal(this.root, 'The recommendation service is unreachable.');
      }
    }
  }

  private paint(): void {
    if (this.state === null) {
      return;
    }
    const handlers: Handlers = {
      onRate: (itemId, itemKind, score) => {
        void this.rate(itemId, itemKind as ItemKind, score);
      },
      onMoveChip: (tag, direction) => {
        void this.moveChip(tag, direction);
      }
    };
    renderApp(this.root, this.state, handlers);
  }

  async rate(itemId: string, itemKind: ItemKind, score: number): Promise<void> {
    if (this.state === null) {
      return;
    }
    this.state = markPending(this.state, itemId, itemKind, score);
    this.paint();
    try {
      const lists = await submitRating(this.base, this.token, itemId, itemKind, score);
      if (this.state !== null) {
        this.state = markSaved(this.state, itemId, itemKind, lists);
        this.paint();
      }
    } catch {
      if (this.state !== null) {
        this.state = revertRow(this.state, itemId, itemKind);
        this.paint();
      }
    }
  }

  async moveChip(tag: string, direction: Direction): Promise<void> {
    if (this.state === null) {
      return;
    }
    try {
      const lists = await reallocateTag(this.base, this.token, tag, direction);
      this.state = withChips(this.state, lists);
      this.paint();
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        // stale view (another tab already moved it): resync with the server
        showToast(this.root, 'That tag moved elsewhere — refreshing.');
        await this.load();
      } else {
        showToast(this.root, 'Could not move the tag; try again.');
      }
    }
  }
}

export function tokenFromLocation(loc: { hash: string; search: string }): string | null {
  const fromHash = loc.hash.replace(/^#\/?/, '');
  if (fromHash) {
    return fromHash;
  }
  const params = new URLSearchParams(loc.search);
  return params.get('token');
}
