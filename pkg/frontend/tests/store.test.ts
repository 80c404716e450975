import { describe, expect, it } from 'vitest';

import { StateMessage } from '../src/messages';
import { KEY_BUFFER_LIMIT, UiStore } from '../src/store';

function state(seq: number): StateMessage {
  const wand = (side: 'L' | 'R') => ({
    side,
    x: 0.5, y: 0.5, z: 0.5, active: false, radius: 0.05,
    freq_hz: 440, amp: 0, cutoff_hz: 1095.4, rt60_s: 1.65,
  });
  return {
    type: 'state', seq, t_us: seq * 1000,
    wands: [wand('L'), wand('R')],
    overlap: 0,
    diag: { nan_resets: 0, dropped_frames: 0 },
  };
}

describe('UiStore', () => {
  it('keeps only the newest seq and discards stale messages', () => {
    const store = new UiStore();
    expect(store.applyState(state(5))).toBe(true);
    expect(store.applyState(state(3))).toBe(false);
    expect(store.applyState(state(5))).toBe(false);
    expect(store.latest?.seq).toBe(5);
    expect(store.staleDiscarded).toBe(2);
    expect(store.applyState(state(6))).toBe(true);
  });

  it('buffers at most 32 key presses and counts the overflow', () => {
    const store = new UiStore();
    for (let i = 0; i < 40; i++) store.bufferKey({ type: 'key', code: 'W' });
    expect(store.pendingKeyCount).toBe(KEY_BUFFER_LIMIT);
    expect(store.droppedKeys).toBe(8);
    expect(store.drainPendingKeys()).toHaveLength(KEY_BUFFER_LIMIT);
    expect(store.pendingKeyCount).toBe(0);
  });

  it('notifies listeners on changes', () => {
    const store = new UiStore();
    let calls = 0;
    store.onChange(() => calls++);
    store.applyState(state(1));
    store.setStatus('connected');
    expect(calls).toBe(2);
  });
});
