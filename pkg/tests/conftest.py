"""Shared builders for synthetic landmark frames."""
from __future__ import annotations

import math

from wandsynth.protocol import (
    FINGERTIPS,
    MCP_JOINTS,
    NUM_LANDMARKS,
    WRIST,
    LandmarkFrame,
    Side,
)

MCP_X_OFFSETS = (-0.03, -0.01, 0.01, 0.03)


def make_frame(side="L", seq=0, confidence=1.0, points=None) -> LandmarkFrame:
    if points is None:
        points = [(0.5, 0.5, 0.0)] * NUM_LANDMARKS
    return LandmarkFrame(side=Side(side), seq=seq, confidence=confidence, points=tuple(points))


def make_hand(
    centroid=(0.5, 0.5),
    aperture=1.5,
    side="L",
    seq=0,
    confidence=1.0,
) -> LandmarkFrame:
    """Build a geometrically consistent synthetic hand.

    The wrist sits below the centroid and the four MCP joints above it so
    that compute_centroid returns exactly `centroid`; fingertips are placed
    at `aperture` palm-lengths from the wrist in a small upward fan so that
    compute_aperture returns exactly `aperture`.
    """
    cx, cy = centroid
    wrist = (cx, cy - 0.08, 0.0)
    mcps = [(cx + dx, cy + 0.02, 0.0) for dx in MCP_X_OFFSETS]
    palm = math.hypot(mcps[1][0] - wrist[0], mcps[1][1] - wrist[1])
    reach = aperture * palm
    tips = []
    for i, phi in enumerate((-0.5, -0.25, 0.0, 0.25, 0.5)):
        tips.append((wrist[0] + reach * math.sin(phi), wrist[1] + reach * math.cos(phi), 0.0))
    points = [(cx, cy, 0.0)] * NUM_LANDMARKS
    points[WRIST] = wrist
    for idx, mcp in zip(MCP_JOINTS, mcps):
        points[idx] = mcp
    for idx, tip in zip(FINGERTIPS, tips):
        points[idx] = tip
    return make_frame(side=side, seq=seq, confidence=confidence, points=points)
