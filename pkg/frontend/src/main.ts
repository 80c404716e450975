/**
 * Entry point: wires the socket, store, scene, readouts, and keyboard
 * capture together. Serve this directory statically and open index.html
 * with the engine running (default ws://127.0.0.1:8080).
 */
import { ReconnectingSocket } from './connection';
import { KEY_LEGEND, keyMessageFor, parseStateMessage } from './messages';
import { ReadoutPanel } from './readouts';
import { SceneView } from './scene';
import { UiStore } from './store';

const WS_URL = `ws://${location.hostname || '127.0.0.1'}:8080`;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

export function boot(): void {
  const store = new UiStore();
  const scene = new SceneView(el<HTMLCanvasElement>('scene'));
  const readouts = new ReadoutPanel(el('readouts'));
  const banner = el('banner');
  const legend = el('legend');

  legend.textContent = KEY_LEGEND.map(([keys, what]) => `${keys}  —  ${what}`).join('\n');

  const socket = new ReconnectingSocket(WS_URL, {
    onOpen: () => {
      store.setStatus('connected');
      for (const key of store.drainPendingKeys()) socket.send(JSON.stringify(key));
    },
    onClose: (retryMs) => {
      store.setStatus('disconnected');
      banner.textContent = `disconnected — retrying in ${retryMs / 1000}s`;
    },
    onMessage: (data) => {
      const msg = parseStateMessage(data);
      if (msg) store.applyState(msg);
    },
  });
  socket.connect();

  window.addEventListener('keydown', (ev) => {
    const msg = keyMessageFor(ev.code);
    if (!msg) return;
    ev.preventDefault();
    if (!socket.send(JSON.stringify(msg))) store.bufferKey(msg);
  });

  store.onChange(() => {
    const connected = store.status === 'connected';
    banner.style.display = connected && store.pendingKeyCount === 0 ? 'none' : 'block';
    if (connected && store.pendingKeyCount > 0) {
      banner.textContent = `${store.pendingKeyCount} key presses buffered`;
    }
    scene.setDimmed(!connected);
  });

  const frame = () => {
    if (store.latest) {
      scene.applyState(store.latest);
      readouts.update(store.latest);
    }
    scene.render();
    requestAnimationFrame(frame);
  };
  requestAnimationFrame(frame);
}

boot();
