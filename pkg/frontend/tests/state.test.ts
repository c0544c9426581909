import { describe, expect, it } from 'vitest';

import { GALLERY_LIMIT, Store, initialState, relationBadge } from '../src/state.js';
import type { FrontMember, GraphSummary } from '../src/types.js';

function member(i: number): FrontMember {
  return { c_sv: i, c_mv: 100 - i, assignment: { views: {} } };
}

describe('Store', () => {
  it('starts empty and not pending', () => {
    const s = initialState();
    expect(s.sessionId).toBeNull();
    expect(s.pending).toBe(false);
  });

  it('notifies subscribers on update', () => {
    const store = new Store();
    const seen: boolean[] = [];
    store.subscribe((s) => seen.push(s.pending));
    store.update({ pending: true });
    store.update({ pending: false });
    expect(seen).toEqual([true, false]);
  });

  it('caps the gallery at the display limit', () => {
    const store = new Store();
    store.update({ front: Array.from({ length: 30 }, (_, i) => member(i)) });
    expect(store.galleryMembers()).toHaveLength(GALLERY_LIMIT);
    // server ordering is preserved, never re-sorted client-side
    expect(store.galleryMembers()[0].c_sv).toBe(0);
  });

  it('allows at most one in-flight mutation', async () => {
    const store = new Store();
    let running = 0;
    let maxRunning = 0;
    const slow = () =>
      new Promise<number>((resolve) => {
        running += 1;
        maxRunning = Math.max(maxRunning, running);
        setTimeout(() => {
          running -= 1;
          resolve(1);
        }, 5);
      });
    const first = store.mutate(slow, () => ({}));
    const second = store.mutate(slow, () => ({}));
    const [a, b] = await Promise.all([first, second]);
    expect(maxRunning).toBe(1);
    expect(a).toBe(1);
    expect(b).toBeNull(); // rejected while pending
  });

  it('records errors and clears pending', async () => {
    const store = new Store();
    await store.mutate(
      () => Promise.reject(new Error('boom')),
      () => ({}),
    );
    expect(store.get().pending).toBe(false);
    expect(store.get().error).toBe('boom');
  });
});

describe('relationBadge', () => {
  const graph: GraphSummary = {
    views: [],
    groups: [],
    relations: [{ a: 'x', b: 'y', kind: 'partial', parent: null }],
    hierarchy: [],
  };

  it('finds the pair in either order', () => {
    expect(relationBadge(graph, 'x', 'y')).toBe('partial');
    expect(relationBadge(graph, 'y', 'x')).toBe('partial');
  });

  it('defaults to none', () => {
    expect(relationBadge(graph, 'x', 'z')).toBe('none');
  });
});
