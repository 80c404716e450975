"""Control surface: wires ingest -> gestures -> wands -> mapping -> synth,
handles the keyboard bindings, deterministic script replay, and the
WebSocket state broadcast for the UI.
"""
from __future__ import annotations

import json
import math
import queue
import socket
import threading
import time
from collections import deque
from dataclasses import dataclass

import numpy as np

from .config import EngineConfig
from .dsp import Synth, write_wav
from .gestures import (
    GestureConfig,
    GestureEvent,
    GestureKind,
    HandTrackState,
    classify,
    reset_on_hand_lost,
)
from .mapping import SynthParams, map_scene
from .protocol import (
    FrameGate,
    Ignored,
    LandmarkFrame,
    ProtocolError,
    Side,
)
from .wands import SceneState, WandAction, apply_action, gesture_to_action

# Keyboard bindings: WASD + Q/Z move the left (blue) wand, arrows + E/C
# the right (red) wand, O/P toggle them.
KEY_CODES = (
    "W", "A", "S", "D",
    "UP", "LEFT", "DOWN", "RIGHT",
    "Q", "Z", "E", "C",
    "O", "P",
)


def normalize_key(code: str) -> str:
    code = code.strip().upper()
    if code.startswith("ARROW"):
        code = code[5:]
    return code


def key_to_action(code: str, cfg: EngineConfig | None = None) -> WandAction | None:
    """Map one key code to its wand action; None for unlisted keys."""
    wand = (cfg or EngineConfig()).wand
    k, d = wand.key_step, wand.depth_step
    code = normalize_key(code)
    moves = {
        "W": (Side.LEFT, 0.0, +k, 0.0),
        "A": (Side.LEFT, -k, 0.0, 0.0),
        "S": (Side.LEFT, 0.0, -k, 0.0),
        "D": (Side.LEFT, +k, 0.0, 0.0),
        "UP": (Side.RIGHT, 0.0, +k, 0.0),
        "LEFT": (Side.RIGHT, -k, 0.0, 0.0),
        "DOWN": (Side.RIGHT, 0.0, -k, 0.0),
        "RIGHT": (Side.RIGHT, +k, 0.0, 0.0),
        "Q": (Side.LEFT, 0.0, 0.0, +d),
        "Z": (Side.LEFT, 0.0, 0.0, -d),
        "E": (Side.RIGHT, 0.0, 0.0, +d),
        "C": (Side.RIGHT, 0.0, 0.0, -d),
    }
    if code in moves:
        side, dx, dy, dz = moves[code]
        return WandAction.delta(side, dx, dy, dz)
    if code == "O":
        return WandAction.toggle_wand(Side.LEFT)
    if code == "P":
        return WandAction.toggle_wand(Side.RIGHT)
    return None


@dataclass
class Diagnostics:
    nan_resets: int = 0
    dropped_frames: int = 0
    decode_errors: int = 0
    ignored_keys: int = 0


@dataclass(frozen=True)
class StateSnapshot:
    """Immutable engine state published to the audio path and UI clients.
    params is always map_scene(scene) for the same scene."""

    seq: int
    t_us: int
    scene: SceneState
    params: SynthParams
    diag: Diagnostics

    def to_json(self) -> str:
        wands = []
        for wand, vp, side in (
            (self.scene.left, self.params.left, "L"),
            (self.scene.right, self.params.right, "R"),
        ):
            wands.append(
                {
                    "side": side,
                    "x": wand.x,
                    "y": wand.y,
                    "z": wand.z,
                    "active": wand.active,
                    "radius": wand.radius,
                    "freq_hz": vp.freq,
                    "amp": vp.amp,
                    "cutoff_hz": vp.cutoff,
                    "rt60_s": vp.rt60,
                }
            )
        return json.dumps(
            {
                "type": "state",
                "seq": self.seq,
                "t_us": self.t_us,
                "wands": wands,
                "overlap": self.scene.overlap,
                "diag": {
                    "nan_resets": self.diag.nan_resets,
                    "dropped_frames": self.diag.dropped_frames,
                },
            }
        )


class ControlCore:
    """Owns the authoritative scene and per-hand gesture state.

    Single-threaded by contract: only the control activity calls into it.
    """

    def __init__(self, cfg: EngineConfig):
        self.cfg = cfg
        self.scene = SceneState.initial(cfg.wand)
        self.hands = {
            Side.LEFT: HandTrackState(Side.LEFT),
            Side.RIGHT: HandTrackState(Side.RIGHT),
        }
        self.diag = Diagnostics()
        self._seq = 0

    def handle_key(self, code: str) -> bool:
        action = key_to_action(code, self.cfg)
        if action is None:
            self.diag.ignored_keys += 1
            return False
        self.scene = apply_action(self.scene, action)
        return True

    def handle_gesture(self, event: GestureEvent) -> None:
        self.scene = apply_action(self.scene, gesture_to_action(event, self.cfg.wand))

    def handle_frame(self, frame: LandmarkFrame, now_ms: float) -> list[GestureEvent]:
        state = self.hands[frame.side]
        events, self.hands[frame.side] = classify(state, frame, now_ms, self.cfg.gesture)
        for event in events:
            self.handle_gesture(event)
        return events

    def handle_hand_lost(self, side: Side) -> None:
        self.hands[side] = reset_on_hand_lost(self.hands[side])

    @property
    def params(self) -> SynthParams:
        return map_scene(self.scene, self.cfg.mapping)

    def snapshot(self, t_us: int, nan_resets: int = 0) -> StateSnapshot:
        self._seq += 1
        self.diag.nan_resets = nan_resets
        return StateSnapshot(
            seq=self._seq,
            t_us=t_us,
            scene=self.scene,
            params=self.params,
            diag=Diagnostics(**vars(self.diag)),
        )


# --- script replay ----------------------------------------------------------


@dataclass(frozen=True)
class ScriptEvent:
    t_ms: float
    key: str | None = None
    gesture: GestureEvent | None = None


class ScriptError(Exception):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


_GESTURE_KINDS = {
    "move": GestureKind.MOVE_DELTA,
    "open": GestureKind.OPEN_HAND,
    "close": GestureKind.CLOSE_HAND,
    "swipe": GestureKind.SWIPE,
}


def parse_script(text: str) -> list[ScriptEvent]:
    """Parse the replay script: one event per line,
    "<t_ms> <KEY>" or "<t_ms> GESTURE <L|R> <move|open|close|swipe> [dx dy]",
    '#' starts a comment. Timestamps must be non-decreasing."""
    events: list[ScriptEvent] = []
    last_t = -1.0
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            t_ms = float(parts[0])
        except ValueError:
            raise ScriptError(line_no, f"bad timestamp {parts[0]!r}") from None
        if t_ms < 0:
            raise ScriptError(line_no, "negative timestamp")
        if t_ms < last_t:
            raise ScriptError(line_no, f"timestamp {t_ms} before previous {last_t}")
        last_t = t_ms
        if len(parts) >= 2 and parts[1].upper() == "GESTURE":
            if len(parts) < 4:
                raise ScriptError(line_no, "GESTURE needs a side and a kind")
            side_str = parts[2].upper()
            if side_str not in ("L", "R"):
                raise ScriptError(line_no, f"bad side {parts[2]!r}")
            kind_str = parts[3].lower()
            if kind_str not in _GESTURE_KINDS:
                raise ScriptError(line_no, f"bad gesture kind {parts[3]!r}")
            dx = dy = 0.0
            if kind_str == "move":
                if len(parts) != 6:
                    raise ScriptError(line_no, "move needs dx dy")
                try:
                    dx, dy = float(parts[4]), float(parts[5])
                except ValueError:
                    raise ScriptError(line_no, "bad move delta") from None
            elif len(parts) != 4:
                raise ScriptError(line_no, f"{kind_str} takes no arguments")
            events.append(
                ScriptEvent(
                    t_ms,
                    gesture=GestureEvent(
                        Side(side_str),
                        _GESTURE_KINDS[kind_str],
                        math.hypot(dx, dy),
                        t_ms,
                        dx=dx,
                        dy=dy,
                    ),
                )
            )
        elif len(parts) == 2:
            code = normalize_key(parts[1])
            if code not in KEY_CODES:
                raise ScriptError(line_no, f"unknown key {parts[1]!r}")
            events.append(ScriptEvent(t_ms, key=code))
        else:
            raise ScriptError(line_no, f"cannot parse {line!r}")
    return events


def final_report(snapshot: StateSnapshot) -> str:
    """Plain key=value summary of the final engine state."""
    lines = []
    for wand, vp, name in (
        (snapshot.scene.left, snapshot.params.left, "left"),
        (snapshot.scene.right, snapshot.params.right, "right"),
    ):
        lines += [
            f"{name}.x={wand.x:.9g}",
            f"{name}.y={wand.y:.9g}",
            f"{name}.z={wand.z:.9g}",
            f"{name}.active={str(wand.active).lower()}",
            f"{name}.radius={wand.radius:.9g}",
            f"{name}.freq_hz={vp.freq:.9g}",
            f"{name}.amp={vp.amp:.9g}",
            f"{name}.cutoff_hz={vp.cutoff:.9g}",
            f"{name}.rt60_s={vp.rt60:.9g}",
        ]
    lines.append(f"overlap={snapshot.scene.overlap:.9g}")
    lines.append(f"diag.nan_resets={snapshot.diag.nan_resets}")
    lines.append(f"diag.dropped_frames={snapshot.diag.dropped_frames}")
    return "\n".join(lines) + "\n"


def run_script(
    cfg: EngineConfig,
    script_text: str,
    duration_s: float,
    out_wav: str | None = None,
) -> tuple[np.ndarray, str, StateSnapshot]:
    """Replay a script against a virtual clock and render offline.

    Deterministic: the same (config, script, duration) always produces
    byte-identical audio and an identical report. Events take effect at
    the first audio block boundary at or after their timestamp.
    """
    events = parse_script(script_text)
    core = ControlCore(cfg)
    synth = Synth(cfg.dsp)
    sr = cfg.dsp.sample_rate
    block = cfg.dsp.block_size
    total = int(round(duration_s * sr))
    out = np.zeros((total, 2), dtype=np.float32)
    ev = 0
    pos = 0
    dirty = True
    while pos < total:
        t_ms = pos / sr * 1000.0
        while ev < len(events) and events[ev].t_ms <= t_ms:
            e = events[ev]
            if e.key is not None:
                core.handle_key(e.key)
            else:
                core.handle_gesture(e.gesture)
            dirty = True
            ev += 1
        if dirty:
            synth.set_params(core.params)
            dirty = False
        n = min(block, total - pos)
        out[pos : pos + n] = synth.render_block(n)
        pos += n
    snapshot = core.snapshot(
        t_us=int(round(total / sr * 1e6)), nan_resets=synth.diagnostics["nan_resets"]
    )
    if out_wav is not None:
        write_wav(out_wav, out, sr)
    return out, final_report(snapshot), snapshot


# --- live engine ------------------------------------------------------------


class UdpIngest(threading.Thread):
    """Network activity: decode datagrams, gate them, feed the control
    activity through bounded per-side deques (newest-wins on overflow:
    stale gesture data is worthless)."""

    def __init__(self, cfg: EngineConfig, inbox: "queue.Queue", diag: Diagnostics):
        super().__init__(daemon=True, name="ingest")
        self.cfg = cfg
        self.inbox = inbox
        self.frames = {
            Side.LEFT: deque(maxlen=cfg.ingest.queue_capacity),
            Side.RIGHT: deque(maxlen=cfg.ingest.queue_capacity),
        }
        self.diag = diag
        self.gate = FrameGate(cfg.ingest.min_confidence, cfg.ingest.hand_timeout_ms)
        self.sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self.sock.bind((cfg.ingest.listen_addr, cfg.ingest.listen_port))
        self.sock.settimeout(0.05)
        self._stop = threading.Event()

    @property
    def port(self) -> int:
        return self.sock.getsockname()[1]

    def stop(self):
        self._stop.set()

    def run(self):
        from .protocol import decode_frame

        while not self._stop.is_set():
            now_ms = time.monotonic() * 1000.0
            try:
                data, _ = self.sock.recvfrom(2048)
            except socket.timeout:
                pass
            except OSError:
                break
            else:
                try:
                    frame = decode_frame(data)
                except Ignored:
                    pass
                except ProtocolError:
                    self.diag.decode_errors += 1
                else:
                    if self.gate.accept(frame, now_ms):
                        self.frames[frame.side].append((frame, now_ms))
                    else:
                        self.diag.dropped_frames += 1
            for lost in self.gate.poll_lost(time.monotonic() * 1000.0):
                self.inbox.put(("lost", lost.side, now_ms))
        self.sock.close()


class Broadcaster(threading.Thread):
    """WebSocket state broadcast plus inbound key messages from UI clients.

    Runs its own asyncio loop; per-client send queues are capped at
    cfg.engine.client_queue with oldest-dropped, so a stalled client can
    never back-pressure the control loop.
    """

    def __init__(self, cfg: EngineConfig, inbox: "queue.Queue"):
        super().__init__(daemon=True, name="broadcast")
        self.cfg = cfg
        self.inbox = inbox
        self.latest: StateSnapshot | None = None
        self._loop = None
        self._clients: dict = {}
        self._ready = threading.Event()
        self._port = None

    @property
    def port(self) -> int:
        self._ready.wait(5.0)
        return self._port

    def publish(self, snapshot: StateSnapshot) -> None:
        self.latest = snapshot

    def stop(self):
        if self._loop is not None:
            self._loop.call_soon_threadsafe(self._loop.stop)

    def run(self):
        import asyncio

        import websockets.asyncio.server as ws_server

        async def handler(conn):
            q: "asyncio.Queue[str]" = asyncio.Queue(maxsize=self.cfg.engine.client_queue)
            self._clients[conn] = q

            async def sender():
                while True:
                    await conn.send(await q.get())

            task = asyncio.ensure_future(sender())
            try:
                async for raw in conn:
                    try:
                        msg = json.loads(raw)
                    except json.JSONDecodeError:
                        continue
                    if msg.get("type") == "key" and isinstance(msg.get("code"), str):
                        self.inbox.put(("key", msg["code"], time.monotonic() * 1000.0))
            except Exception:
                pass
            finally:
                task.cancel()
                self._clients.pop(conn, None)

        async def pump():
            interval = 1.0 / self.cfg.engine.broadcast_hz
            last_seq = -1
            while True:
                await asyncio.sleep(interval)
                snap = self.latest
                if snap is None or snap.seq == last_seq:
                    continue
                last_seq = snap.seq
                text = snap.to_json()
                for q in list(self._clients.values()):
                    if q.full():
                        try:
                            q.get_nowait()
                        except asyncio.QueueEmpty:
                            pass
                    try:
                        q.put_nowait(text)
                    except asyncio.QueueFull:
                        pass

        async def main():
            server = await ws_server.serve(
                handler, self.cfg.engine.ws_addr, self.cfg.engine.ws_port
            )
            self._port = server.sockets[0].getsockname()[1]
            self._ready.set()
            await pump()

        loop = asyncio.new_event_loop()
        self._loop = loop
        try:
            loop.run_until_complete(main())
        except RuntimeError:
            pass
        finally:
            loop.close()


class KeyboardInput(threading.Thread):
    """Terminal key reader for --input keys: raw chars plus arrow escape
    sequences, forwarded to the control inbox."""

    _ARROWS = {"A": "UP", "B": "DOWN", "C": "RIGHT", "D": "LEFT"}

    def __init__(self, inbox: "queue.Queue"):
        super().__init__(daemon=True, name="keyboard")
        self.inbox = inbox
        self._stop = threading.Event()

    def stop(self):
        self._stop.set()

    def run(self):
        import select
        import sys
        import termios
        import tty

        if not sys.stdin.isatty():
            return
        fd = sys.stdin.fileno()
        old = termios.tcgetattr(fd)
        try:
            tty.setcbreak(fd)
            while not self._stop.is_set():
                ready, _, _ = select.select([fd], [], [], 0.1)
                if not ready:
                    continue
                ch = sys.stdin.read(1)
                if ch == "\x1b":
                    rest = sys.stdin.read(2)
                    code = self._ARROWS.get(rest[-1:], None)
                else:
                    code = ch.upper()
                if code:
                    self.inbox.put(("key", code, time.monotonic() * 1000.0))
        finally:
            termios.tcsetattr(fd, termios.TCSADRAIN, old)


class LiveEngine:
    """Long-running engine: ingest + control + broadcast (+ audio when a
    sound device is available)."""

    def __init__(self, cfg: EngineConfig, no_audio: bool = False):
        cfg.validate()
        self.cfg = cfg
        self.core = ControlCore(cfg)
        self.synth = Synth(cfg.dsp)
        self.inbox: "queue.Queue" = queue.Queue(maxsize=256)
        self.ingest = (
            UdpIngest(cfg, self.inbox, self.core.diag)
            if cfg.engine.input_mode == "osc"
            else None
        )
        self.broadcaster = Broadcaster(cfg, self.inbox)
        self._stop = threading.Event()
        self._audio_stream = None
        self._latest_params: SynthParams | None = None
        self._params_lock = threading.Lock()
        self.no_audio = no_audio or not cfg.engine.audio

    def start(self) -> None:
        if self.ingest:
            self.ingest.start()
        if self.cfg.engine.input_mode == "keys":
            self.keyboard = KeyboardInput(self.inbox)
            self.keyboard.start()
        self.broadcaster.start()
        if not self.no_audio:
            self._start_audio()

    def _start_audio(self) -> None:
        try:
            import sounddevice as sd
        except ImportError:
            self.no_audio = True
            return

        def callback(outdata, frames, time_info, status):
            with self._params_lock:
                params = self._latest_params
            if params is not None:
                self.synth.set_params(params)
            outdata[:] = self.synth.render_block(frames)

        self._audio_stream = sd.OutputStream(
            samplerate=self.cfg.dsp.sample_rate,
            channels=2,
            blocksize=self.cfg.dsp.block_size,
            callback=callback,
        )
        self._audio_stream.start()

    def stop(self) -> None:
        self._stop.set()
        if self._audio_stream is not None:
            # fade to silence before tearing the stream down
            from .dsp import silence_params

            with self._params_lock:
                self._latest_params = silence_params()
            time.sleep(self.cfg.engine.fade_out_ms / 1000.0)
            self._audio_stream.stop()
            self._audio_stream.close()
        if self.ingest:
            self.ingest.stop()
        self.broadcaster.stop()

    def run_control_loop(self, max_ticks: int | None = None) -> None:
        """The control activity: drain inputs, update state, publish."""
        tick = 1.0 / self.cfg.engine.tick_hz
        ticks = 0
        while not self._stop.is_set():
            deadline = time.monotonic() + tick
            self._drain_inbox()
            snap = self.core.snapshot(
                t_us=int(time.monotonic() * 1e6),
                nan_resets=self.synth.diagnostics["nan_resets"],
            )
            with self._params_lock:
                self._latest_params = snap.params
            self.broadcaster.publish(snap)
            ticks += 1
            if max_ticks is not None and ticks >= max_ticks:
                break
            remaining = deadline - time.monotonic()
            if remaining > 0:
                time.sleep(remaining)

    def _drain_inbox(self) -> None:
        if self.ingest:
            for dq in self.ingest.frames.values():
                while dq:
                    frame, t_ms = dq.popleft()
                    self.core.handle_frame(frame, t_ms)
        for _ in range(64):
            try:
                item = self.inbox.get_nowait()
            except queue.Empty:
                return
            kind = item[0]
            if kind == "key":
                self.core.handle_key(item[1])
            elif kind == "frame":
                self.core.handle_frame(item[1], item[2])
            elif kind == "lost":
                self.core.handle_hand_lost(item[1])
