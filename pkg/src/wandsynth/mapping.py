"""Scene-to-synthesis parameter mapping.

Y position -> pitch (exponential, equal motion = equal intervals),
Z -> amplitude (affine, with a floor so a distant wand stays faintly
audible inside its reverb tail), X -> low-pass cutoff (exponential),
Z -> reverb decay (farther = longer, a bigger room), sphere overlap ->
cross-modulation depth.
"""
from __future__ import annotations

from dataclasses import dataclass

from .wands import SceneState, WandState, overlap_fraction


@dataclass(frozen=True)
class MapConfig:
    f_min: float = 110.0
    f_max: float = 1760.0
    c_min: float = 200.0
    c_max: float = 6000.0
    rt_min: float = 0.3
    rt_max: float = 3.0
    amp_floor: float = 0.1

    def validate(self, sample_rate: float = 48000.0) -> None:
        for lo, hi, name in (
            (self.f_min, self.f_max, "frequency"),
            (self.c_min, self.c_max, "cutoff"),
            (self.rt_min, self.rt_max, "reverb"),
        ):
            if not 0 < lo < hi:
                raise ValueError(f"{name} range needs 0 < min < max, got [{lo}, {hi}]")
        if self.c_max >= sample_rate / 6:
            raise ValueError(
                f"cutoff ceiling {self.c_max} too close to sample rate {sample_rate}"
            )
        if not 0.0 <= self.amp_floor < 1.0:
            raise ValueError(f"amp_floor out of [0,1): {self.amp_floor}")


@dataclass(frozen=True)
class VoiceParams:
    freq: float
    amp: float
    cutoff: float
    rt60: float
    active: bool


@dataclass(frozen=True)
class SynthParams:
    left: VoiceParams
    right: VoiceParams
    xmod: float


def map_pitch(y: float, cfg: MapConfig = MapConfig()) -> float:
    """Hz from vertical position; lower positions give lower frequencies."""
    return cfg.f_min * (cfg.f_max / cfg.f_min) ** y


def map_amp(wand: WandState, cfg: MapConfig = MapConfig()) -> float:
    """Linear gain from depth; inactive wands are muted outright."""
    if not wand.active:
        return 0.0
    return cfg.amp_floor + (1.0 - cfg.amp_floor) * wand.z


def map_cutoff(x: float, cfg: MapConfig = MapConfig()) -> float:
    """Low-pass cutoff Hz; moving left darkens the timbre."""
    return cfg.c_min * (cfg.c_max / cfg.c_min) ** x


def map_reverb(z: float, cfg: MapConfig = MapConfig()) -> float:
    """RT60 seconds from depth; a far wand plays in a larger room."""
    return cfg.rt_min + (1.0 - z) * (cfg.rt_max - cfg.rt_min)


def _map_wand(wand: WandState, cfg: MapConfig) -> VoiceParams:
    return VoiceParams(
        freq=map_pitch(wand.y, cfg),
        amp=map_amp(wand, cfg),
        cutoff=map_cutoff(wand.x, cfg),
        rt60=map_reverb(wand.z, cfg),
        active=wand.active,
    )


def map_scene(scene: SceneState, cfg: MapConfig = MapConfig()) -> SynthParams:
    """Full scene to synth parameters; pure."""
    return SynthParams(
        left=_map_wand(scene.left, cfg),
        right=_map_wand(scene.right, cfg),
        xmod=overlap_fraction(scene),
    )
