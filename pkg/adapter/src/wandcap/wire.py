"""Outbound wire format: one OSC message per hand per frame.

Address "/nl/hand", type tags ",sh" + 64 "f": side string, seq int64,
then confidence and 21 landmark triples as big-endian float32. Strings
and blobs pad to 4-byte boundaries. Written against the engine's
published byte layout; the engine's decoder is the compatibility test.
"""
from __future__ import annotations

import struct

ADDRESS = "/nl/hand"
TYPE_TAGS = ",sh" + "f" * 64
SIDES = ("L", "R")


class FrameInvalid(ValueError):
    """Frame rejected before send; message names the offending field."""


def _padded_string(s: str) -> bytes:
    raw = s.encode("ascii") + b"\x00"
    return raw + b"\x00" * (-len(raw) % 4)


def validate(side: str, seq: int, confidence: float, points) -> None:
    if side not in SIDES:
        raise FrameInvalid(f"side must be L or R, got {side!r}")
    if not 0 <= seq < 2**63:
        raise FrameInvalid(f"seq out of int64 range: {seq}")
    if not 0.0 <= confidence <= 1.0:
        raise FrameInvalid(f"confidence out of [0,1]: {confidence}")
    if len(points) != 21:
        raise FrameInvalid(f"need exactly 21 landmarks, got {len(points)}")
    for i, (x, y, z) in enumerate(points):
        if not (-0.5 <= x <= 1.5 and -0.5 <= y <= 1.5):
            raise FrameInvalid(f"landmark {i} outside [-0.5, 1.5]: ({x}, {y})")
        del z  # z is an unconstrained relative depth


def encode(side: str, seq: int, confidence: float, points) -> bytes:
    """Encode one validated hand frame as a 348-byte datagram."""
    validate(side, seq, confidence, points)
    floats = [confidence]
    for x, y, z in points:
        floats += [x, y, z]
    return (
        _padded_string(ADDRESS)
        + _padded_string(TYPE_TAGS)
        + _padded_string(side)
        + struct.pack(">q", seq)
        + struct.pack(">64f", *floats)
    )
