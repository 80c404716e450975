"""Coordinate conventions and per-side sequence numbering.

Detector output is in image coordinates: x,y in [0,1], y growing
downward, x as seen by the camera. The engine wants y growing upward
and, with mirroring on (the default; performers face the camera),
x flipped so moving the physical hand right moves the wand right.
"""
from __future__ import annotations

from dataclasses import dataclass, field


def normalize_point(x: float, y: float, z: float, mirror: bool) -> tuple[float, float, float]:
    """Flip y (image y grows downward); mirror x for selfie view."""
    nx = 1.0 - x if mirror else x
    return (nx, 1.0 - y, z)


def normalize_landmarks(points, mirror: bool):
    return [normalize_point(x, y, z, mirror) for x, y, z in points]


@dataclass
class SequenceCounter:
    """Strictly increasing per-side sequence numbers for one adapter run."""

    _next: dict[str, int] = field(default_factory=lambda: {"L": 0, "R": 0})

    def take(self, side: str) -> int:
        seq = self._next[side]
        self._next[side] = seq + 1
        return seq
