"""The capture loop: source -> normalize -> validate -> encode -> send.

Deliberately dumb: no gesture logic lives here, the engine's classifier
is the single authority. When no hand is detected nothing is emitted;
the engine's hand-lost timeout covers absence.
"""
from __future__ import annotations

import socket
from dataclasses import dataclass, field

from .normalize import SequenceCounter, normalize_landmarks
from .wire import FrameInvalid, encode


@dataclass
class AdapterConfig:
    camera: int = 0
    target_host: str = "127.0.0.1"
    target_port: int = 9000
    mirror: bool = True
    fps: float = 30.0
    min_confidence: float = 0.5

    def validate(self) -> None:
        if not 0 < self.fps <= 240:
            raise ValueError(f"fps out of range: {self.fps}")
        if not 0.0 <= self.min_confidence <= 1.0:
            raise ValueError(f"min_confidence out of [0,1]: {self.min_confidence}")
        if not 0 < self.target_port <= 65535:
            raise ValueError(f"target_port out of range: {self.target_port}")


@dataclass
class AdapterStats:
    sent: int = 0
    rejected: int = 0
    per_side: dict = field(default_factory=lambda: {"L": 0, "R": 0})


class Adapter:
    """Consumes a landmark source and emits one datagram per hand."""

    def __init__(self, cfg: AdapterConfig, sock: socket.socket | None = None):
        cfg.validate()
        self.cfg = cfg
        self.sock = sock or socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self.seqs = SequenceCounter()
        self.stats = AdapterStats()

    def handle_hands(self, hands) -> None:
        """Normalize, validate, and send every detected hand in one frame."""
        for hand in hands:
            if hand["confidence"] < self.cfg.min_confidence:
                continue
            side = hand["side"]
            points = normalize_landmarks(hand["points"], self.cfg.mirror)
            try:
                datagram = encode(side, self.seqs.take(side), hand["confidence"], points)
            except FrameInvalid:
                self.stats.rejected += 1
                continue
            self.sock.sendto(datagram, (self.cfg.target_host, self.cfg.target_port))
            self.stats.sent += 1
            self.stats.per_side[side] += 1

    def run(self, source) -> AdapterStats:
        for _t_ms, hands in source:
            self.handle_hands(hands)
        return self.stats
