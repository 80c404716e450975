"""Camera-side capture adapter for the wandsynth engine."""
from .adapter import Adapter, AdapterConfig, AdapterStats
from .normalize import SequenceCounter, normalize_landmarks, normalize_point
from .sources import camera_source, trace_source
from .wire import FrameInvalid, encode, validate

__version__ = "0.1.0"

__all__ = [
    "Adapter",
    "AdapterConfig",
    "AdapterStats",
    "SequenceCounter",
    "normalize_landmarks",
    "normalize_point",
    "camera_source",
    "trace_source",
    "FrameInvalid",
    "encode",
    "validate",
    "__version__",
]
