"""CLI: `wandcap --camera 0 --target 127.0.0.1:9000 --mirror --fps 30
--min-confidence 0.5`, or `--trace file.json` to replay a recording."""
from __future__ import annotations

import argparse
import sys

from .adapter import Adapter, AdapterConfig
from .sources import camera_source, trace_source


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="wandcap", description="hand-landmark capture adapter"
    )
    parser.add_argument("--camera", type=int, default=0, help="camera index")
    parser.add_argument("--target", default="127.0.0.1:9000", metavar="HOST:PORT")
    mirror = parser.add_mutually_exclusive_group()
    mirror.add_argument("--mirror", dest="mirror", action="store_true", default=True)
    mirror.add_argument("--no-mirror", dest="mirror", action="store_false")
    parser.add_argument("--fps", type=float, default=30.0, help="frame rate cap")
    parser.add_argument("--min-confidence", type=float, default=0.5)
    parser.add_argument("--trace", help="replay a JSON landmark trace instead of the camera")
    args = parser.parse_args(argv)

    host, _, port = args.target.rpartition(":")
    try:
        cfg = AdapterConfig(
            camera=args.camera,
            target_host=host or "127.0.0.1",
            target_port=int(port),
            mirror=args.mirror,
            fps=args.fps,
            min_confidence=args.min_confidence,
        )
        adapter = Adapter(cfg)
    except ValueError as e:
        print(f"bad arguments: {e}", file=sys.stderr)
        return 2

    if args.trace:
        source = trace_source(args.trace)
    else:
        source = camera_source(cfg.camera, cfg.fps, cfg.min_confidence)
    try:
        stats = adapter.run(source)
    except KeyboardInterrupt:
        stats = adapter.stats
    print(
        f"sent={stats.sent} (L={stats.per_side['L']} R={stats.per_side['R']}) "
        f"rejected={stats.rejected}",
        file=sys.stderr,
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
