/**
 * Wire types for the engine's WebSocket endpoint, and the keyboard
 * binding table. This file is the only coupling to the engine: the
 * JSON schema here must match the engine's state broadcast.
 */

export interface WandReadout {
  side: 'L' | 'R';
  x: number;
  y: number;
  z: number;
  active: boolean;
  radius: number;
  freq_hz: number;
  amp: number;
  cutoff_hz: number;
  rt60_s: number;
}

export interface StateMessage {
  type: 'state';
  seq: number;
  t_us: number;
  wands: WandReadout[];
  overlap: number;
  diag: { nan_resets: number; dropped_frames: number };
}

export interface KeyMessage {
  type: 'key';
  code: string;
}

/** KeyboardEvent.code → engine key code, for all 14 bound keys. */
export const KEY_BINDINGS: Record<string, string> = {
  KeyW: 'W',
  KeyA: 'A',
  KeyS: 'S',
  KeyD: 'D',
  ArrowUp: 'UP',
  ArrowLeft: 'LEFT',
  ArrowDown: 'DOWN',
  ArrowRight: 'RIGHT',
  KeyQ: 'Q',
  KeyZ: 'Z',
  KeyE: 'E',
  KeyC: 'C',
  KeyO: 'O',
  KeyP: 'P',
};

/** Legend rows shown on screen: [keys, action]. */
export const KEY_LEGEND: Array<[string, string]> = [
  ['W / A / S / D', 'move left wand up / left / down / right'],
  ['arrow keys', 'move right wand up / left / down / right'],
  ['Q / Z', 'left wand nearer / farther'],
  ['E / C', 'right wand nearer / farther'],
  ['O / P', 'toggle left / right wand'],
];

/** Map a KeyboardEvent.code to an outbound key message, or null if unbound. */
export function keyMessageFor(eventCode: string): KeyMessage | null {
  const code = KEY_BINDINGS[eventCode];
  return code === undefined ? null : { type: 'key', code };
}

function isFiniteNumber(v: unknown): v is number {
  return typeof v === 'number' && Number.isFinite(v);
}

function isWand(v: unknown): v is WandReadout {
  if (typeof v !== 'object' || v === null) return false;
  const w = v as Record<string, unknown>;
  return (
    (w.side === 'L' || w.side === 'R') &&
    typeof w.active === 'boolean' &&
    ['x', 'y', 'z', 'radius', 'freq_hz', 'amp', 'cutoff_hz', 'rt60_s'].every((k) =>
      isFiniteNumber(w[k]),
    )
  );
}

/** Parse and validate one inbound message; null for anything unusable. */
export function parseStateMessage(raw: string): StateMessage | null {
  let doc: unknown;
  try {
    doc = JSON.parse(raw);
  } catch {
    return null;
  }
  if (typeof doc !== 'object' || doc === null) return null;
  const m = doc as Record<string, unknown>;
  if (m.type !== 'state' || !isFiniteNumber(m.seq) || !isFiniteNumber(m.overlap)) return null;
  if (!Array.isArray(m.wands) || m.wands.length !== 2 || !m.wands.every(isWand)) return null;
  return m as unknown as StateMessage;
}
