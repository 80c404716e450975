import { describe, expect, it } from 'vitest';

import {
  BACKOFF_INITIAL_MS,
  BACKOFF_MAX_MS,
  ReconnectingSocket,
  SocketLike,
} from '../src/connection';

class FakeSocket implements SocketLike {
  onopen: ((ev?: unknown) => void) | null = null;
  onclose: ((ev?: unknown) => void) | null = null;
  onerror: ((ev?: unknown) => void) | null = null;
  onmessage: ((ev: { data: unknown }) => void) | null = null;
  sent: string[] = [];
  send(data: string) {
    this.sent.push(data);
  }
  close() {
    this.onclose?.();
  }
}

function harness() {
  const sockets: FakeSocket[] = [];
  const scheduled: Array<{ fn: () => void; ms: number }> = [];
  const retries: number[] = [];
  const conn = new ReconnectingSocket(
    'ws://test',
    { onClose: (ms) => retries.push(ms) },
    () => {
      const s = new FakeSocket();
      sockets.push(s);
      return s;
    },
    (fn, ms) => scheduled.push({ fn, ms }),
  );
  const runNextTimer = () => scheduled.shift()!.fn();
  return { conn, sockets, scheduled, retries, runNextTimer };
}

describe('ReconnectingSocket', () => {
  it('backs off exponentially from 250 ms and caps at 4 s', () => {
    const h = harness();
    h.conn.connect();
    for (let i = 0; i < 6; i++) {
      h.sockets[i].onclose?.();
      h.runNextTimer();
    }
    expect(h.retries).toEqual([250, 500, 1000, 2000, 4000, 4000]);
    expect(BACKOFF_INITIAL_MS).toBe(250);
    expect(BACKOFF_MAX_MS).toBe(4000);
  });

  it('resets the backoff after a successful connection', () => {
    const h = harness();
    h.conn.connect();
    h.sockets[0].onclose?.();
    h.runNextTimer();
    h.sockets[1].onclose?.();
    h.runNextTimer(); // retries now 250, 500
    h.sockets[2].onopen?.();
    h.sockets[2].onclose?.();
    expect(h.retries).toEqual([250, 500, 250]);
  });

  it('refuses to send before the socket opens', () => {
    const h = harness();
    h.conn.connect();
    expect(h.conn.send('x')).toBe(false);
    h.sockets[0].onopen?.();
    expect(h.conn.send('x')).toBe(true);
    expect(h.sockets[0].sent).toEqual(['x']);
  });

  it('stops reconnecting after close()', () => {
    const h = harness();
    h.conn.connect();
    h.sockets[0].onopen?.();
    h.conn.close();
    expect(h.scheduled).toHaveLength(0);
  });
});
