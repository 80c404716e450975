/**
 * Reconnecting WebSocket wrapper. Exponential backoff 0.25 s → 4 s,
 * reset on a successful connection. The WebSocket constructor and the
 * timer are injectable so tests can run without a browser.
 */

export interface SocketLike {
  onopen: ((ev?: unknown) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  send(data: string): void;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;
export type Scheduler = (fn: () => void, ms: number) => unknown;

export const BACKOFF_INITIAL_MS = 250;
export const BACKOFF_MAX_MS = 4000;

export interface ConnectionHooks {
  onOpen?: () => void;
  onClose?: (nextRetryMs: number) => void;
  onMessage?: (data: string) => void;
}

export class ReconnectingSocket {
  private socket: SocketLike | null = null;
  private retryMs = BACKOFF_INITIAL_MS;
  private stopped = false;
  private opened = false;

  constructor(
    private readonly url: string,
    private readonly hooks: ConnectionHooks,
    private readonly makeSocket: SocketFactory = (u) =>
      new WebSocket(u) as unknown as SocketLike,
    private readonly schedule: Scheduler = (fn, ms) => setTimeout(fn, ms),
  ) {}

  connect(): void {
    if (this.stopped) return;
    this.opened = false;
    let socket: SocketLike;
    try {
      socket = this.makeSocket(this.url);
    } catch {
      this.retryLater();
      return;
    }
    this.socket = socket;
    socket.onopen = () => {
      this.opened = true;
      this.retryMs = BACKOFF_INITIAL_MS;
      this.hooks.onOpen?.();
    };
    socket.onmessage = (ev) => this.hooks.onMessage?.(String(ev.data));
    socket.onerror = () => {};
    socket.onclose = () => {
      this.socket = null;
      this.retryLater();
    };
  }

  /** Send if connected; false means the caller should buffer. */
  send(data: string): boolean {
    if (this.socket === null || !this.opened) return false;
    try {
      this.socket.send(data);
      return true;
    } catch {
      return false;
    }
  }

  get connected(): boolean {
    return this.socket !== null && this.opened;
  }

  close(): void {
    this.stopped = true;
    this.socket?.close();
    this.socket = null;
  }

  private retryLater(): void {
    if (this.stopped) return;
    const wait = this.retryMs;
    this.retryMs = Math.min(this.retryMs * 2, BACKOFF_MAX_MS);
    this.hooks.onClose?.(wait);
    this.schedule(() => this.connect(), wait);
  }
}
