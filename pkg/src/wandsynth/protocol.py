"""Wire format for hand-landmark frames.

One OSC 1.0 message per hand per camera frame, address ``/nl/hand``:
side string ("L"/"R"), int64 sequence number, float32 confidence, then
63 float32 coordinates (x0,y0,z0 .. x20,y20,z20). Big-endian, 4-byte
aligned, no bundles.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field
from enum import Enum

NUM_LANDMARKS = 21
ADDRESS = "/nl/hand"

WRIST = 0
FINGERTIPS = (4, 8, 12, 16, 20)
MCP_JOINTS = (5, 9, 13, 17)
MIDDLE_MCP = 9

_F32 = struct.Struct(">f")


def as_f32(value: float) -> float:
    """Round a value to the nearest float32, returned as a Python float.

    Frame fields are 32-bit on the wire; storing them pre-rounded makes
    decode(encode(frame)) == frame exact.
    """
    return _F32.unpack(_F32.pack(value))[0]


class Side(str, Enum):
    LEFT = "L"
    RIGHT = "R"


class ProtocolError(Exception):
    """Base for wire-format errors."""


class Ignored(ProtocolError):
    """Datagram is valid OSC but not ours (different address)."""


class MalformedMessage(ProtocolError):
    """Datagram does not parse as the expected OSC message."""

    def __init__(self, reason: str, offset: int = -1):
        super().__init__(f"{reason} (offset {offset})" if offset >= 0 else reason)
        self.offset = offset


class InvalidFrame(ProtocolError):
    """Message parsed but the frame violates its invariants."""

    def __init__(self, reason: str, fld: str = ""):
        super().__init__(reason)
        self.field = fld


@dataclass(frozen=True)
class LandmarkFrame:
    """One hand's 21 detected landmarks for a single camera frame.

    Coordinates are normalized: x,y in [0,1] nominally (y grows upward),
    slight out-of-frame tracking down to [-0.5, 1.5] is tolerated; z is a
    relative depth offset with unconstrained sign.
    """

    side: Side
    seq: int
    confidence: float
    points: tuple[tuple[float, float, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "side", Side(self.side))
        object.__setattr__(self, "confidence", as_f32(self.confidence))
        object.__setattr__(
            self,
            "points",
            tuple((as_f32(x), as_f32(y), as_f32(z)) for x, y, z in self.points),
        )
        self.validate()

    def validate(self) -> None:
        if len(self.points) != NUM_LANDMARKS:
            raise InvalidFrame(
                f"expected {NUM_LANDMARKS} landmarks, got {len(self.points)}", "points"
            )
        if not 0 <= self.seq < 2**63:
            raise InvalidFrame(f"seq out of range: {self.seq}", "seq")
        if not 0.0 <= self.confidence <= 1.0:
            raise InvalidFrame(f"confidence out of [0,1]: {self.confidence}", "confidence")
        for i, (x, y, _z) in enumerate(self.points):
            if not (-0.5 <= x <= 1.5 and -0.5 <= y <= 1.5):
                raise InvalidFrame(f"landmark {i} x/y out of [-0.5,1.5]: ({x}, {y})", "points")


def _padded_string(s: str) -> bytes:
    raw = s.encode("ascii") + b"\0"
    return raw + b"\0" * (-len(raw) % 4)


TYPE_TAGS = ",sh" + "f" * (1 + 3 * NUM_LANDMARKS)


def encode_frame(frame: LandmarkFrame) -> bytes:
    """Serialize a frame to one OSC message. Raises InvalidFrame if the
    frame violates its invariants."""
    frame.validate()
    out = bytearray()
    out += _padded_string(ADDRESS)
    out += _padded_string(TYPE_TAGS)
    out += _padded_string(frame.side.value)
    out += struct.pack(">q", frame.seq)
    floats = [frame.confidence]
    for x, y, z in frame.points:
        floats += (x, y, z)
    out += struct.pack(f">{len(floats)}f", *floats)
    assert len(out) % 4 == 0
    return bytes(out)


def _read_string(data: bytes, offset: int) -> tuple[str, int]:
    end = data.find(b"\0", offset)
    if end < 0:
        raise MalformedMessage("unterminated string", offset)
    raw = data[offset:end]
    try:
        s = raw.decode("ascii")
    except UnicodeDecodeError:
        raise MalformedMessage("non-ascii string", offset) from None
    nxt = end + 1 + (-(end + 1 - offset) % 4)
    if nxt > len(data):
        raise MalformedMessage("string padding past end", offset)
    if data[end:nxt].strip(b"\0"):
        raise MalformedMessage("nonzero padding bytes", end)
    return s, nxt


def decode_frame(data: bytes) -> LandmarkFrame:
    """Parse one datagram back into a LandmarkFrame.

    Raises Ignored for other OSC addresses, MalformedMessage for byte-level
    problems, InvalidFrame for a parsed frame violating its invariants.
    Never reads past the end of ``data``.
    """
    if len(data) % 4 != 0:
        raise MalformedMessage("length not a multiple of 4", len(data))
    address, off = _read_string(data, 0)
    if address != ADDRESS:
        raise Ignored(address)
    tags, off = _read_string(data, off)
    if tags != TYPE_TAGS:
        raise MalformedMessage(f"unexpected type tags {tags!r}", off)
    side_str, off = _read_string(data, off)
    if side_str not in ("L", "R"):
        raise MalformedMessage(f"bad side {side_str!r}", off)
    n_floats = 1 + 3 * NUM_LANDMARKS
    need = 8 + 4 * n_floats
    if len(data) - off != need:
        raise MalformedMessage(f"argument block is {len(data) - off} bytes, expected {need}", off)
    (seq,) = struct.unpack_from(">q", data, off)
    off += 8
    values = struct.unpack_from(f">{n_floats}f", data, off)
    if seq < 0:
        raise InvalidFrame(f"negative seq {seq}", "seq")
    points = tuple(
        (values[1 + 3 * i], values[2 + 3 * i], values[3 + 3 * i]) for i in range(NUM_LANDMARKS)
    )
    return LandmarkFrame(side=Side(side_str), seq=seq, confidence=values[0], points=points)


@dataclass(frozen=True)
class HandLost:
    """Marker emitted when a side has produced no frame for the timeout."""

    side: Side


class FrameGate:
    """Per-side ordering, confidence and liveness filter.

    Drops stale/duplicate sequence numbers and low-confidence frames;
    reports hand-lost after ``hand_timeout_ms`` of silence. Sequence
    tracking resets on hand-lost so a restarted capture adapter (seq back
    to 0) is accepted again after one timeout.
    """

    def __init__(self, min_confidence: float = 0.5, hand_timeout_ms: float = 500.0):
        self.min_confidence = min_confidence
        self.hand_timeout_ms = hand_timeout_ms
        self._last_seq: dict[Side, int] = {}
        self._last_time: dict[Side, float] = {}

    def accept(self, frame: LandmarkFrame, now_ms: float) -> bool:
        """True if the frame should be forwarded downstream."""
        if frame.confidence < self.min_confidence:
            return False
        last = self._last_seq.get(frame.side)
        if last is not None and frame.seq <= last:
            return False
        self._last_seq[frame.side] = frame.seq
        self._last_time[frame.side] = now_ms
        return True

    def poll_lost(self, now_ms: float) -> list[HandLost]:
        """Sides whose timeout elapsed since their last accepted frame."""
        lost = []
        for side, t in list(self._last_time.items()):
            if now_ms - t >= self.hand_timeout_ms:
                lost.append(HandLost(side))
                del self._last_time[side]
                del self._last_seq[side]
        return lost
