"""Command-line entry points: run (live), render (script to WAV),
print-config."""
from __future__ import annotations

import argparse
import json
import signal
import sys
from pathlib import Path

from .config import ConfigError, config_to_dict, load_config
from .engine import LiveEngine, run_script


def _add_config_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="config JSON path (falls back to $NL_CONFIG)")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="wandsynth", description="gesture-to-sound wand engine"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run the live engine")
    _add_config_arg(run_p)
    run_p.add_argument("--input", choices=["osc", "keys"], help="input mode override")
    run_p.add_argument("--listen", metavar="ADDR:PORT", help="OSC/UDP listen override")
    run_p.add_argument("--ws", metavar="ADDR:PORT", help="WebSocket broadcast override")
    run_p.add_argument("--no-audio", action="store_true", help="disable audio output")

    render_p = sub.add_parser("render", help="render a replay script to WAV")
    _add_config_arg(render_p)
    render_p.add_argument("--script", required=True, help="script file")
    render_p.add_argument("--out", required=True, help="output WAV path")
    render_p.add_argument("--duration", type=float, required=True, help="seconds")
    render_p.add_argument("--report", help="write the final-state report here")

    print_p = sub.add_parser("print-config", help="emit the effective config")
    _add_config_arg(print_p)

    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
    except (ConfigError, OSError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2

    if args.command == "print-config":
        print(json.dumps(config_to_dict(cfg), indent=2))
        return 0

    if args.command == "render":
        try:
            script = Path(args.script).read_text()
        except OSError as e:
            print(f"cannot read script: {e}", file=sys.stderr)
            return 2
        _, report, _ = run_script(cfg, script, args.duration, out_wav=args.out)
        if args.report:
            Path(args.report).write_text(report)
        else:
            sys.stdout.write(report)
        return 0

    # run
    import dataclasses

    engine_cfg = cfg.engine
    ingest_cfg = cfg.ingest
    if args.input:
        engine_cfg = dataclasses.replace(engine_cfg, input_mode=args.input)
    if args.ws:
        addr, _, port = args.ws.rpartition(":")
        engine_cfg = dataclasses.replace(engine_cfg, ws_addr=addr, ws_port=int(port))
    if args.listen:
        addr, _, port = args.listen.rpartition(":")
        ingest_cfg = dataclasses.replace(ingest_cfg, listen_addr=addr, listen_port=int(port))
    cfg = dataclasses.replace(cfg, engine=engine_cfg, ingest=ingest_cfg)

    try:
        engine = LiveEngine(cfg, no_audio=args.no_audio)
        engine.start()
    except OSError as e:
        print(f"startup failed: {e}", file=sys.stderr)
        return 1
    print(
        f"engine running: input={cfg.engine.input_mode} "
        f"udp={cfg.ingest.listen_addr}:{cfg.ingest.listen_port} "
        f"ws={cfg.engine.ws_addr}:{engine.broadcaster.port} "
        f"audio={'off' if engine.no_audio else 'on'}",
        file=sys.stderr,
    )
    signal.signal(signal.SIGINT, lambda *_: engine.stop())
    signal.signal(signal.SIGTERM, lambda *_: engine.stop())
    try:
        engine.run_control_loop()
    except KeyboardInterrupt:
        pass
    finally:
        engine.stop()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
