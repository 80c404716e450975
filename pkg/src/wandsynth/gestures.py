"""Per-hand gesture classification.

Turns a stream of landmark frames into discrete/continuous gesture events
using the current frame plus retained previous-frame state: continuous
centroid motion, hysteresis-gated hand open/close with auto-repeat, and a
fast horizontal swipe with a refractory period.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

from .protocol import (
    FINGERTIPS,
    MCP_JOINTS,
    MIDDLE_MCP,
    WRIST,
    LandmarkFrame,
    Side,
)


class DegenerateHand(Exception):
    """All landmarks coincident; aperture is undefined."""


class GestureKind(Enum):
    MOVE_DELTA = "move"
    OPEN_HAND = "open"
    CLOSE_HAND = "close"
    SWIPE = "swipe"


class ApertureState(Enum):
    NEUTRAL = "neutral"
    OPEN = "open"
    CLOSED = "closed"


@dataclass(frozen=True)
class GestureEvent:
    side: Side
    kind: GestureKind
    magnitude: float
    time_ms: float
    dx: float = 0.0
    dy: float = 0.0


@dataclass(frozen=True)
class GestureConfig:
    theta_open: float = 1.6
    theta_close: float = 1.2
    repeat_ms: float = 250.0
    move_deadzone: float = 0.004
    max_step: float = 0.08
    swipe_dist: float = 0.25
    swipe_window_ms: float = 300.0
    swipe_refractory_ms: float = 500.0


@dataclass(frozen=True)
class HandTrackState:
    """Retained context for one hand. Immutable; classify returns a new one."""

    side: Side
    prev_centroid: tuple[float, float] | None = None
    prev_time: float = 0.0
    aperture_state: ApertureState = ApertureState.NEUTRAL
    swipe_window: tuple[tuple[float, float, float], ...] = field(default_factory=tuple)
    refractory_until: float = 0.0
    repeat_next: float = 0.0


def compute_aperture(frame: LandmarkFrame) -> float:
    """Hand openness: mean fingertip-to-wrist distance over palm length.

    Distances use x,y only; the monocular z estimate is too noisy to help.
    An open hand measures around 1.7-2.1, a fist around 0.9-1.2.
    """
    wx, wy, _ = frame.points[WRIST]
    mx, my, _ = frame.points[MIDDLE_MCP]
    palm = math.hypot(mx - wx, my - wy)
    if palm < 1e-6:
        raise DegenerateHand(f"palm length {palm} below 1e-6")
    total = 0.0
    for tip in FINGERTIPS:
        tx, ty, _ = frame.points[tip]
        total += math.hypot(tx - wx, ty - wy)
    return total / len(FINGERTIPS) / palm


def compute_centroid(frame: LandmarkFrame) -> tuple[float, float]:
    """Palm centroid: mean of wrist + the four finger MCP joints (robust
    to finger articulation)."""
    idxs = (WRIST,) + MCP_JOINTS
    x = sum(frame.points[i][0] for i in idxs) / len(idxs)
    y = sum(frame.points[i][1] for i in idxs) / len(idxs)
    return x, y


def reset_on_hand_lost(state: HandTrackState) -> HandTrackState:
    """Clear motion context when the hand disappears; the refractory clock
    is kept so a swipe cannot double-fire across a dropout."""
    return replace(
        state,
        prev_centroid=None,
        swipe_window=(),
        aperture_state=ApertureState.NEUTRAL,
    )


def classify(
    state: HandTrackState,
    frame: LandmarkFrame,
    now_ms: float,
    cfg: GestureConfig = GestureConfig(),
) -> tuple[list[GestureEvent], HandTrackState]:
    """Classify one frame against the retained state.

    Pure function; event priority is swipe, then open/close, then move.
    A firing swipe suppresses MoveDelta until its refractory expires.
    """
    if frame.side != state.side:
        raise ValueError(f"frame side {frame.side} != state side {state.side}")
    if now_ms < state.prev_time:
        raise ValueError("time went backwards")

    events: list[GestureEvent] = []
    centroid = compute_centroid(frame)
    cx, cy = centroid

    window = tuple(
        s for s in state.swipe_window if now_ms - s[0] <= cfg.swipe_window_ms
    ) + ((now_ms, cx, cy),)

    refractory_until = state.refractory_until
    if now_ms >= refractory_until:
        for t0, x0, y0 in window[:-1]:
            dx = cx - x0
            if abs(dx) >= cfg.swipe_dist and abs(dx) > 2.0 * abs(cy - y0):
                events.append(
                    GestureEvent(state.side, GestureKind.SWIPE, dx, now_ms)
                )
                refractory_until = now_ms + cfg.swipe_refractory_ms
                window = ()
                break

    aperture_state = state.aperture_state
    repeat_next = state.repeat_next
    try:
        aperture = compute_aperture(frame)
    except DegenerateHand:
        aperture = None
    if aperture is not None:
        if aperture >= cfg.theta_open and aperture_state != ApertureState.OPEN:
            events.append(GestureEvent(state.side, GestureKind.OPEN_HAND, aperture, now_ms))
            aperture_state = ApertureState.OPEN
            repeat_next = now_ms + cfg.repeat_ms
        elif aperture <= cfg.theta_close and aperture_state != ApertureState.CLOSED:
            events.append(GestureEvent(state.side, GestureKind.CLOSE_HAND, aperture, now_ms))
            aperture_state = ApertureState.CLOSED
            repeat_next = now_ms + cfg.repeat_ms
        elif aperture_state != ApertureState.NEUTRAL and now_ms >= repeat_next:
            kind = (
                GestureKind.OPEN_HAND
                if aperture_state == ApertureState.OPEN
                else GestureKind.CLOSE_HAND
            )
            events.append(GestureEvent(state.side, kind, aperture, now_ms))
            repeat_next = now_ms + cfg.repeat_ms

    if state.prev_centroid is not None and now_ms >= refractory_until:
        dx = cx - state.prev_centroid[0]
        dy = cy - state.prev_centroid[1]
        if math.hypot(dx, dy) >= cfg.move_deadzone:
            dx = max(-cfg.max_step, min(cfg.max_step, dx))
            dy = max(-cfg.max_step, min(cfg.max_step, dy))
            events.append(
                GestureEvent(
                    state.side,
                    GestureKind.MOVE_DELTA,
                    math.hypot(dx, dy),
                    now_ms,
                    dx=dx,
                    dy=dy,
                )
            )

    new_state = HandTrackState(
        side=state.side,
        prev_centroid=centroid,
        prev_time=now_ms,
        aperture_state=aperture_state,
        swipe_window=window,
        refractory_until=refractory_until,
        repeat_next=repeat_next,
    )
    return events, new_state
