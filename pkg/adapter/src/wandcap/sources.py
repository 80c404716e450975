"""Landmark sources: live camera (mediapipe, optional dependency) or a
prerecorded JSON trace for development and testing.

Both yield (t_ms, hands) where hands is a list of dicts:
    {"side": "L"|"R", "confidence": float, "points": [[x, y, z] * 21]}
with points in raw image coordinates (y down, unmirrored).
"""
from __future__ import annotations

import json
import time
from pathlib import Path
from typing import Iterator

DetectedHands = list[dict]


def trace_source(path: str | Path, realtime: bool = True) -> Iterator[tuple[float, DetectedHands]]:
    """Replay a recorded trace: a JSON array of
    {"t_ms": ..., "hands": [...]} entries with non-decreasing t_ms."""
    entries = json.loads(Path(path).read_text())
    start = time.monotonic()
    last_t = -1.0
    for entry in entries:
        t_ms = float(entry["t_ms"])
        if t_ms < last_t:
            raise ValueError(f"trace timestamps must not decrease (at {t_ms})")
        last_t = t_ms
        if realtime:
            wait = start + t_ms / 1000.0 - time.monotonic()
            if wait > 0:
                time.sleep(wait)
        yield t_ms, entry["hands"]


def camera_source(
    camera_index: int, fps_cap: float, min_confidence: float
) -> Iterator[tuple[float, DetectedHands]]:
    """Capture frames and run the hand-landmark detector. Requires the
    optional mediapipe/opencv dependencies."""
    try:
        import cv2
        import mediapipe as mp
    except ImportError as e:
        raise SystemExit(
            f"camera mode needs the [camera] extra (mediapipe, opencv): {e}"
        )

    capture = cv2.VideoCapture(camera_index)
    if not capture.isOpened():
        raise SystemExit(f"cannot open camera {camera_index}")

    hands = mp.solutions.hands.Hands(
        max_num_hands=2,
        min_detection_confidence=min_confidence,
        min_tracking_confidence=min_confidence,
    )
    interval = 1.0 / fps_cap
    start = time.monotonic()
    skipped = 0
    try:
        while True:
            frame_start = time.monotonic()
            ok, frame = capture.read()
            if not ok:
                skipped += 1
                continue
            result = hands.process(cv2.cvtColor(frame, cv2.COLOR_BGR2RGB))
            detected: DetectedHands = []
            if result.multi_hand_landmarks:
                for landmarks, handedness in zip(
                    result.multi_hand_landmarks, result.multi_handedness
                ):
                    label = handedness.classification[0]
                    detected.append(
                        {
                            "side": "L" if label.label == "Left" else "R",
                            "confidence": label.score,
                            "points": [[p.x, p.y, p.z] for p in landmarks.landmark],
                        }
                    )
            yield (time.monotonic() - start) * 1000.0, detected
            wait = interval - (time.monotonic() - frame_start)
            if wait > 0:
                time.sleep(wait)
    finally:
        capture.release()
        hands.close()
