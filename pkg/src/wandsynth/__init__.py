"""Gesture-to-sound wand engine.

Streamed hand-landmark frames (or keyboard/script input) drive two
virtual wand spheres whose positions control a two-voice synthesizer:
height is pitch, depth is loudness and reverb size, lateral position is
filter cutoff, and sphere overlap cross-modulates the oscillators.
"""

from .config import EngineConfig, load_config
from .engine import ControlCore, LiveEngine, run_script
from .gestures import GestureEvent, classify, compute_aperture, compute_centroid
from .mapping import MapConfig, SynthParams, map_scene
from .protocol import LandmarkFrame, Side, decode_frame, encode_frame
from .wands import SceneState, WandState, apply_action, overlap_fraction

__all__ = [
    "EngineConfig",
    "load_config",
    "ControlCore",
    "LiveEngine",
    "run_script",
    "GestureEvent",
    "classify",
    "compute_aperture",
    "compute_centroid",
    "MapConfig",
    "SynthParams",
    "map_scene",
    "LandmarkFrame",
    "Side",
    "decode_frame",
    "encode_frame",
    "SceneState",
    "WandState",
    "apply_action",
    "overlap_fraction",
]

__version__ = "0.1.0"
