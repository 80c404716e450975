import { describe, expect, it } from 'vitest';

import { KEY_BINDINGS, keyMessageFor, parseStateMessage } from '../src/messages';

const sampleState = JSON.stringify({
  type: 'state',
  seq: 3,
  t_us: 1000,
  wands: [
    { side: 'L', x: 0.5, y: 0.5, z: 0.5, active: true, radius: 0.05, freq_hz: 440, amp: 0.55, cutoff_hz: 1095.4, rt60_s: 1.65 },
    { side: 'R', x: 0.5, y: 0.5, z: 0.5, active: false, radius: 0.05, freq_hz: 440, amp: 0, cutoff_hz: 1095.4, rt60_s: 1.65 },
  ],
  overlap: 0,
  diag: { nan_resets: 0, dropped_frames: 0 },
});

describe('key bindings', () => {
  it('covers exactly the 14 mapped keys', () => {
    expect(Object.keys(KEY_BINDINGS)).toHaveLength(14);
    expect(new Set(Object.values(KEY_BINDINGS)).size).toBe(14);
  });

  it('builds outbound messages for bound keys', () => {
    expect(keyMessageFor('KeyW')).toEqual({ type: 'key', code: 'W' });
    expect(keyMessageFor('ArrowUp')).toEqual({ type: 'key', code: 'UP' });
  });

  it('ignores unbound keys', () => {
    expect(keyMessageFor('KeyX')).toBeNull();
    expect(keyMessageFor('F1')).toBeNull();
    expect(keyMessageFor('Space')).toBeNull();
  });
});

describe('parseStateMessage', () => {
  it('accepts a well-formed snapshot', () => {
    const msg = parseStateMessage(sampleState);
    expect(msg?.seq).toBe(3);
    expect(msg?.wands[0].side).toBe('L');
  });

  it('rejects garbage', () => {
    expect(parseStateMessage('not json')).toBeNull();
    expect(parseStateMessage('42')).toBeNull();
    expect(parseStateMessage('{"type":"state"}')).toBeNull();
    expect(parseStateMessage(JSON.stringify({ type: 'other', seq: 1 }))).toBeNull();
  });

  it('rejects a snapshot missing a wand field', () => {
    const doc = JSON.parse(sampleState);
    delete doc.wands[1].freq_hz;
    expect(parseStateMessage(JSON.stringify(doc))).toBeNull();
  });
});
