import { beforeEach, describe, expect, it } from 'vitest';

import { FeedbackApp, tokenFromLocation } from '../src/app.js';
import { installFixtureFetch, makeItem, standardWorld } from './fixture_server.js';
import type { FixtureWorld } from './fixture_server.js';

function mount(): HTMLElement {
  document.body.innerHTML = '<main id="app"></main>';
  return document.getElementById('app')!;
}

function chipTexts(root: HTMLElement, row: 'relevant' | 'irrelevant'): string[] {
  return [...root.querySelectorAll(`.chip-row.${row} .chip`)].map((el) => el.textContent ?? '');
}

async function settled(): Promise<void> {
  await Promise.resolve();
  await Promise.resolve();
}

describe('feedback page against the fixture server', () => {
  let world: FixtureWorld;

  beforeEach(() => {
    world = standardWorld();
    installFixtureFetch(world);
  });

  it('renders one row per payload item, documents linking out', async () => {
    world.items = [];
    for (let i = 0; i < 28; i += 1) {
      world.items.push(makeItem(`B${i}`, 'book', `Book ${i}`));
    }
    world.items.push(makeItem('D1', 'document', 'Doc one', 'https://repo.example.org/D1'));
    world.items.push(makeItem('D2', 'document', 'Doc two', 'https://repo.example.org/D2'));

    const root = mount();
    await new FeedbackApp(root, '', world.token).load();
    const rows = root.querySelectorAll('.rec-row');
    expect(rows.length).toBe(30);
    const docLinks = root.querySelectorAll('.rec-row a.title');
    expect(docLinks.length).toBe(2);
    expect((docLinks[0] as HTMLAnchorElement).href).toContain('repo.example.org');
  });

  it('rating an item 0 lands its tags in the irrelevant chip row in one round-trip', async () => {
    const root = mount();
    const app = new FeedbackApp(root, '', world.token);
    await app.load();
    expect(chipTexts(root, 'irrelevant')).toEqual(['veterinary']);

    await app.rate('B1', 'book', 0);
    const irrelevant = chipTexts(root, 'irrelevant');
    expect(irrelevant).toContain('linear');
    expect(irrelevant).toContain('programming');
    expect(chipTexts(root, 'relevant')).not.toContain('linear');
    // exactly one POST round-trip beyond the initial GET
    expect(world.requests.filter((u) => u.endsWith('/ratings')).length).toBe(1);
  });

  it('positive ratings mark the row saved without touching chips', async () => {
    const root = mount();
    const app = new FeedbackApp(root, '', world.token);
    await app.load();
    const before = chipTexts(root, 'relevant');
    await app.rate('B2', 'book', 2);
    expect(chipTexts(root, 'relevant')).toEqual(before);
    const row = [...root.querySelectorAll('.rec-row')].find(
      (el) => (el as HTMLElement).dataset.itemId === 'B2'
    )!;
    expect(row.querySelector('.status')!.textContent).toBe('saved');
    expect(row.querySelectorAll('.rating .selected').length).toBe(1);
  });

  it('moving a chip and moving it back restores the initial rows', async () => {
    const root = mount();
    const app = new FeedbackApp(root, '', world.token);
    await app.load();
    const initialRelevant = chipTexts(root, 'relevant');
    const initialIrrelevant = chipTexts(root, 'irrelevant');

    await app.moveChip('linear', 'to_irrelevant');
    expect(chipTexts(root, 'irrelevant')).toContain('linear');

    await app.moveChip('linear', 'to_relevant');
    expect(chipTexts(root, 'relevant')).toEqual(initialRelevant);
    expect(chipTexts(root, 'irrelevant')).toEqual(initialIrrelevant);
  });

  it('a stale chip move resyncs from the server instead of erroring', async () => {
    const root = mount();
    const app = new FeedbackApp(root, '', world.token);
    await app.load();
    await app.moveChip('not-there', 'to_irrelevant');
    await settled();
    // full refresh happened: GET called twice
    const gets = world.requests.filter((u) => u.endsWith(world.token));
    expect(gets.length).toBe(2);
  });

  it('failed rating reverts the row with a retry affordance', async () => {
    const root = mount();
    const app = new FeedbackApp(root, '', world.token);
    await app.load();
    globalThis.fetch = (async () => {
      throw new TypeError('network down');
    }) as typeof fetch;
    await app.rate('B1', 'book', 3);
    const row = [...root.querySelectorAll('.rec-row')].find(
      (el) => (el as HTMLElement).dataset.itemId === 'B1'
    )!;
    expect(row.querySelector('.status')!.textContent).toMatch(/retry/);
    expect(row.querySelectorAll('.rating .selected').length).toBe(0);
  });

  it('expired and unknown tokens become full-page messages', async () => {
    const root = mount();
    await new FeedbackApp(root, '', 'other-token').load();
    expect(root.querySelector('.fatal')!.textContent).toMatch(/not valid/);

    globalThis.fetch = (async () =>
      new Response(JSON.stringify({ error: 'expired' }), { status: 410 })) as typeof fetch;
    await new FeedbackApp(root, '', world.token).load();
    expect(root.querySelector('.fatal')!.textContent).toMatch(/expired/);
  });

  it('empty payload renders the no-recommendations state', async () => {
    world.items = [];
    const root = mount();
    await new FeedbackApp(root, '', world.token).load();
    expect(root.querySelector('.empty')).not.toBeNull();
  });
});

describe('token extraction', () => {
  it('reads the fragment first, then the query string', () => {
    expect(tokenFromLocation({ hash: '#abc123', search: '' })).toBe('abc123');
    expect(tokenFromLocation({ hash: '#/abc123', search: '' })).toBe('abc123');
    expect(tokenFromLocation({ hash: '', search: '?token=qq' })).toBe('qq');
    expect(tokenFromLocation({ hash: '', search: '' })).toBeNull();
  });
});
