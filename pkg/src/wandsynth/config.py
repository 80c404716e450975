"""Engine configuration: one JSON document, one section per subsystem.

Unknown keys are startup errors (catches typos early); every threshold
and range constant used anywhere in the engine is overridable here.
"""
from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from .dsp import SynthConfig
from .gestures import GestureConfig
from .mapping import MapConfig
from .wands import WandConfig

ENV_CONFIG_VAR = "NL_CONFIG"

INPUT_MODES = ("osc", "keys", "script")


@dataclass(frozen=True)
class IngestConfig:
    listen_addr: str = "0.0.0.0"
    listen_port: int = 9000
    min_confidence: float = 0.5
    hand_timeout_ms: float = 500.0
    queue_capacity: int = 8


@dataclass(frozen=True)
class RuntimeConfig:
    input_mode: str = "osc"
    tick_hz: float = 120.0
    ws_addr: str = "127.0.0.1"
    ws_port: int = 8080
    broadcast_hz: float = 30.0
    client_queue: int = 4
    audio: bool = True
    fade_out_ms: float = 50.0


@dataclass(frozen=True)
class EngineConfig:
    ingest: IngestConfig = field(default_factory=IngestConfig)
    gesture: GestureConfig = field(default_factory=GestureConfig)
    wand: WandConfig = field(default_factory=WandConfig)
    mapping: MapConfig = field(default_factory=MapConfig)
    dsp: SynthConfig = field(default_factory=SynthConfig)
    engine: RuntimeConfig = field(default_factory=RuntimeConfig)

    def validate(self) -> None:
        if self.engine.input_mode not in INPUT_MODES:
            raise ConfigError(f"engine.input_mode must be one of {INPUT_MODES}")
        if not 0 <= self.ingest.listen_port <= 65535:  # 0 = ephemeral
            raise ConfigError(f"ingest.listen_port out of range: {self.ingest.listen_port}")
        if self.engine.tick_hz <= 0:
            raise ConfigError(f"engine.tick_hz must be positive: {self.engine.tick_hz}")
        try:
            self.dsp.validate()
            self.mapping.validate(self.dsp.sample_rate)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        if self.gesture.theta_open <= self.gesture.theta_close:
            raise ConfigError(
                "gesture.theta_open must exceed gesture.theta_close "
                f"({self.gesture.theta_open} <= {self.gesture.theta_close})"
            )
        if not 0 < self.wand.r_min < self.wand.r_max:
            raise ConfigError(f"wand radii need 0 < r_min < r_max")


class ConfigError(Exception):
    """Configuration rejected; message names the offending field."""


_SECTIONS = {
    "ingest": IngestConfig,
    "gesture": GestureConfig,
    "wand": WandConfig,
    "mapping": MapConfig,
    "dsp": SynthConfig,
    "engine": RuntimeConfig,
}


def _build_section(name: str, cls, values: dict):
    known = {f.name: f.type for f in dataclasses.fields(cls)}
    for key in values:
        if key not in known:
            raise ConfigError(f"unknown key '{name}.{key}'")
    try:
        return cls(**values)
    except TypeError as e:
        raise ConfigError(f"section '{name}': {e}") from None


def config_from_dict(doc: dict) -> EngineConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    for key in doc:
        if key not in _SECTIONS:
            raise ConfigError(f"unknown section '{key}'")
    sections = {
        name: _build_section(name, cls, doc.get(name, {}))
        for name, cls in _SECTIONS.items()
    }
    cfg = EngineConfig(**sections)
    cfg.validate()
    return cfg


def config_to_dict(cfg: EngineConfig) -> dict:
    return {name: dataclasses.asdict(getattr(cfg, name)) for name in _SECTIONS}


def load_config(path: str | os.PathLike | None = None) -> EngineConfig:
    """Load from an explicit path, else $NL_CONFIG, else all defaults."""
    if path is None:
        path = os.environ.get(ENV_CONFIG_VAR) or None
    if path is None:
        return EngineConfig()
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON: {e}") from None
    return config_from_dict(doc)
