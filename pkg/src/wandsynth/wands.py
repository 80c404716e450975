"""The two wand spheres: position state, action application, overlap.

Left hand drives the blue (left) wand, right hand the red (right) wand.
Positions live in the unit cube; z doubles as a size control (closer =
bigger) and the sphere radii feed the overlap fraction that drives
cross-modulation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .gestures import GestureEvent, GestureKind
from .protocol import Side


@dataclass(frozen=True)
class WandConfig:
    key_step: float = 0.05
    depth_step: float = 0.10
    gesture_gain: float = 1.0
    r_min: float = 0.02
    r_max: float = 0.08


@dataclass(frozen=True)
class WandState:
    side: Side
    x: float = 0.5
    y: float = 0.5
    z: float = 0.5
    active: bool = False
    r_min: float = 0.02
    r_max: float = 0.08

    @property
    def radius(self) -> float:
        return self.r_min + self.z * (self.r_max - self.r_min)


@dataclass(frozen=True)
class WandAction:
    side: Side
    dx: float = 0.0
    dy: float = 0.0
    dz: float = 0.0
    toggle: bool = False

    @classmethod
    def delta(cls, side: Side, dx: float = 0.0, dy: float = 0.0, dz: float = 0.0) -> "WandAction":
        return cls(side, dx, dy, dz)

    @classmethod
    def toggle_wand(cls, side: Side) -> "WandAction":
        return cls(side, toggle=True)


@dataclass(frozen=True)
class SceneState:
    left: WandState
    right: WandState

    @classmethod
    def initial(cls, cfg: WandConfig = WandConfig()) -> "SceneState":
        return cls(
            left=WandState(Side.LEFT, r_min=cfg.r_min, r_max=cfg.r_max),
            right=WandState(Side.RIGHT, r_min=cfg.r_min, r_max=cfg.r_max),
        )

    def wand(self, side: Side) -> WandState:
        return self.left if side == Side.LEFT else self.right

    @property
    def overlap(self) -> float:
        return overlap_fraction(self)


def gesture_to_action(event: GestureEvent, cfg: WandConfig = WandConfig()) -> WandAction:
    """Translate a classified gesture into a wand action.

    Moves map 1:1 (times gesture_gain) into scene units, open/close step
    the depth axis (open = closer = +z), a swipe toggles the wand.
    """
    if event.kind == GestureKind.MOVE_DELTA:
        return WandAction.delta(
            event.side, dx=cfg.gesture_gain * event.dx, dy=cfg.gesture_gain * event.dy
        )
    if event.kind == GestureKind.OPEN_HAND:
        return WandAction.delta(event.side, dz=+cfg.depth_step)
    if event.kind == GestureKind.CLOSE_HAND:
        return WandAction.delta(event.side, dz=-cfg.depth_step)
    return WandAction.toggle_wand(event.side)


def _clamp01(v: float) -> float:
    return 0.0 if v < 0.0 else 1.0 if v > 1.0 else v


def apply_action(scene: SceneState, action: WandAction) -> SceneState:
    """Apply one action; coordinates clamp to [0,1]. A toggled-off wand
    keeps tracking position (it is muted, not frozen)."""
    wand = scene.wand(action.side)
    if action.toggle:
        wand = replace(wand, active=not wand.active)
    else:
        wand = replace(
            wand,
            x=_clamp01(wand.x + action.dx),
            y=_clamp01(wand.y + action.dy),
            z=_clamp01(wand.z + action.dz),
        )
    if action.side == Side.LEFT:
        return replace(scene, left=wand)
    return replace(scene, right=wand)


def overlap_fraction(scene: SceneState) -> float:
    """Normalized sphere intersection: (r_L + r_R - d) / (r_L + r_R),
    clamped to [0,1]. Zero when either wand is inactive, so a muted wand
    cannot inject cross-modulation."""
    lw, rw = scene.left, scene.right
    if not (lw.active and rw.active):
        return 0.0
    d = math.sqrt((lw.x - rw.x) ** 2 + (lw.y - rw.y) ** 2 + (lw.z - rw.z) ** 2)
    rsum = lw.radius + rw.radius
    return _clamp01((rsum - d) / rsum)
