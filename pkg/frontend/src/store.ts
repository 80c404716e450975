/**
 * UI-side state: the latest engine snapshot, connection status, and a
 * small outbound buffer for key presses made while disconnected.
 *
 * The store is deliberately stateless with respect to the instrument:
 * it never recomputes engine values, only holds the latest broadcast.
 */
import { KeyMessage, StateMessage } from './messages';

export type ConnectionStatus = 'connecting' | 'connected' | 'disconnected';

export const KEY_BUFFER_LIMIT = 32;

export class UiStore {
  latest: StateMessage | null = null;
  status: ConnectionStatus = 'connecting';
  staleDiscarded = 0;
  droppedKeys = 0;
  private pendingKeys: KeyMessage[] = [];
  private listeners: Array<() => void> = [];

  /** Accept a snapshot; stale (non-increasing seq) messages are discarded. */
  applyState(msg: StateMessage): boolean {
    if (this.latest !== null && msg.seq <= this.latest.seq) {
      this.staleDiscarded += 1;
      return false;
    }
    this.latest = msg;
    this.notify();
    return true;
  }

  setStatus(status: ConnectionStatus): void {
    this.status = status;
    this.notify();
  }

  /**
   * Buffer a key message while disconnected; at most KEY_BUFFER_LIMIT
   * are held, further presses are counted and dropped.
   */
  bufferKey(msg: KeyMessage): void {
    if (this.pendingKeys.length >= KEY_BUFFER_LIMIT) {
      this.droppedKeys += 1;
      return;
    }
    this.pendingKeys.push(msg);
    this.notify();
  }

  drainPendingKeys(): KeyMessage[] {
    const keys = this.pendingKeys;
    this.pendingKeys = [];
    return keys;
  }

  get pendingKeyCount(): number {
    return this.pendingKeys.length;
  }

  onChange(fn: () => void): void {
    this.listeners.push(fn);
  }

  private notify(): void {
    for (const fn of this.listeners) fn();
  }
}
