"""Control-surface tests: key bindings, script replay, snapshots, config,
and a live WebSocket/UDP loopback."""
import dataclasses
import json
import socket
import threading
import time

import numpy as np
import pytest

from wandsynth.config import (
    ConfigError,
    EngineConfig,
    config_from_dict,
    config_to_dict,
    load_config,
)
from wandsynth.engine import (
    KEY_CODES,
    ControlCore,
    LiveEngine,
    ScriptError,
    key_to_action,
    parse_script,
    run_script,
)
from wandsynth.mapping import map_scene
from wandsynth.protocol import Side, encode_frame

from conftest import make_hand
from dsp_utils import measure_fundamental

SR = 48000


class TestKeyBindings:
    def test_all_14_keys_mapped(self):
        actions = [key_to_action(k) for k in KEY_CODES]
        assert all(a is not None for a in actions)
        assert len(set((a.side, a.dx, a.dy, a.dz, a.toggle) for a in actions)) == 14

    @pytest.mark.parametrize(
        "key,side,axis,sign",
        [
            ("W", Side.LEFT, "dy", +1),
            ("A", Side.LEFT, "dx", -1),
            ("S", Side.LEFT, "dy", -1),
            ("D", Side.LEFT, "dx", +1),
            ("UP", Side.RIGHT, "dy", +1),
            ("LEFT", Side.RIGHT, "dx", -1),
            ("DOWN", Side.RIGHT, "dy", -1),
            ("RIGHT", Side.RIGHT, "dx", +1),
            ("Q", Side.LEFT, "dz", +1),
            ("Z", Side.LEFT, "dz", -1),
            ("E", Side.RIGHT, "dz", +1),
            ("C", Side.RIGHT, "dz", -1),
        ],
    )
    def test_direction_rows(self, key, side, axis, sign):
        a = key_to_action(key)
        assert a.side == side and not a.toggle
        assert getattr(a, axis) * sign > 0

    def test_toggles(self):
        for key, side in (("O", Side.LEFT), ("P", Side.RIGHT)):
            a = key_to_action(key)
            assert a.toggle and a.side == side

    def test_unlisted_key_ignored(self):
        assert key_to_action("X") is None
        assert key_to_action("F1") is None

    def test_case_and_arrow_aliases(self):
        assert key_to_action("w") == key_to_action("W")
        assert key_to_action("ArrowUp") == key_to_action("UP")


class TestScriptParsing:
    def test_basic(self):
        events = parse_script("0 O\n100 W\n# comment\n\n200 GESTURE L open\n")
        assert len(events) == 3
        assert events[0].key == "O"
        assert events[2].gesture.side == Side.LEFT

    def test_move_gesture_args(self):
        (e,) = parse_script("50 GESTURE R move 0.02 -0.01")
        assert e.gesture.dx == pytest.approx(0.02)
        assert e.gesture.dy == pytest.approx(-0.01)

    @pytest.mark.parametrize(
        "bad",
        [
            "abc W",
            "100 BADKEY",
            "100 GESTURE X open",
            "100 GESTURE L teleport",
            "100 GESTURE L move",
            "-5 W",
            "200 W\n100 A",  # timestamps must not go backwards
        ],
    )
    def test_rejects_malformed(self, bad):
        with pytest.raises(ScriptError):
            parse_script(bad)

    def test_error_carries_line_number(self):
        with pytest.raises(ScriptError) as err:
            parse_script("0 O\nnonsense line here\n")
        assert err.value.line_no == 2


class TestControlCore:
    def test_snapshot_params_match_scene(self):
        core = ControlCore(EngineConfig())
        core.handle_key("O")
        core.handle_key("W")
        snap = core.snapshot(t_us=0)
        assert snap.params == map_scene(core.scene, core.cfg.mapping)

    def test_snapshot_seq_increases(self):
        core = ControlCore(EngineConfig())
        seqs = [core.snapshot(t_us=i).seq for i in range(5)]
        assert seqs == sorted(set(seqs))

    def test_snapshot_json_schema(self):
        core = ControlCore(EngineConfig())
        core.handle_key("O")
        doc = json.loads(core.snapshot(t_us=123).to_json())
        assert doc["type"] == "state"
        assert {w["side"] for w in doc["wands"]} == {"L", "R"}
        for w in doc["wands"]:
            for key in ("x", "y", "z", "active", "radius", "freq_hz", "amp", "cutoff_hz", "rt60_s"):
                assert key in w
        assert "overlap" in doc
        assert set(doc["diag"]) == {"nan_resets", "dropped_frames"}

    def test_ignored_key_counted(self):
        core = ControlCore(EngineConfig())
        assert not core.handle_key("X")
        assert core.diag.ignored_keys == 1

    def test_frames_drive_wand(self):
        core = ControlCore(EngineConfig())
        for i, x in enumerate([0.3, 0.35, 0.4]):
            core.handle_frame(make_hand(centroid=(x, 0.5), seq=i, side="L"), i * 33.0)
        assert core.scene.left.x > 0.5  # moved right by the deltas


class TestRunScript:
    def test_empty_script_is_silent_defaults(self):
        out, report, snap = run_script(EngineConfig(), "", 0.5)
        assert np.all(out == 0.0)
        assert not snap.scene.left.active
        assert not snap.scene.right.active
        assert "left.x=0.5" in report

    def test_both_toggles_sound_at_440(self):
        out, report, snap = run_script(EngineConfig(), "0 O\n0 P\n", 1.0)
        assert snap.scene.left.active and snap.scene.right.active
        assert snap.params.left.freq == pytest.approx(440.0)
        assert snap.params.right.freq == pytest.approx(440.0)
        # coincident wands fully overlap, so the rendered pitch is
        # cross-modulated; the base target stays 440
        assert snap.params.xmod == 1.0
        assert np.sqrt(np.mean(out[SR // 4 :, 0] ** 2)) > 0.1

    def test_single_toggle_renders_440(self):
        out, _, snap = run_script(EngineConfig(), "0 O\n", 1.0)
        assert snap.params.xmod == 0.0
        f = measure_fundamental(out[SR // 4 :, 0], SR)
        assert f == pytest.approx(440.0, rel=0.005)

    def test_ten_ups_saturate_and_pitch_rises(self):
        script = "0 O\n" + "".join(
            f"{1000 + 100 * i} W\n" for i in range(10)
        )
        out, report, snap = run_script(EngineConfig(), script, 3.0)
        assert snap.scene.left.y == pytest.approx(1.0)
        assert snap.params.left.freq == pytest.approx(1760.0)
        f = measure_fundamental(out[-SR:, 0], SR)
        assert f == pytest.approx(1760.0, rel=0.005)

    def test_gesture_events_apply(self):
        script = "0 GESTURE L swipe\n0 GESTURE L open\n"
        _, _, snap = run_script(EngineConfig(), script, 0.2)
        assert snap.scene.left.active
        assert snap.scene.left.z == pytest.approx(0.6)

    def test_deterministic(self, tmp_path):
        script = "0 O\n200 W\n400 GESTURE R move 0.05 0.05\n"
        w1, w2 = tmp_path / "a.wav", tmp_path / "b.wav"
        _, r1, _ = run_script(EngineConfig(), script, 1.0, out_wav=w1)
        _, r2, _ = run_script(EngineConfig(), script, 1.0, out_wav=w2)
        assert r1 == r2
        assert w1.read_bytes() == w2.read_bytes()


class TestConfig:
    def test_defaults_valid(self):
        EngineConfig().validate()

    def test_round_trip_dict(self):
        cfg = EngineConfig()
        assert config_from_dict(config_to_dict(cfg)) == cfg

    def test_unknown_section_rejected(self):
        with pytest.raises(ConfigError):
            config_from_dict({"typo": {}})

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError) as err:
            config_from_dict({"mapping": {"f_mim": 100}})
        assert "f_mim" in str(err.value)

    def test_invalid_value_names_field(self):
        with pytest.raises(ConfigError):
            config_from_dict({"engine": {"input_mode": "telepathy"}})

    def test_load_from_file_and_env(self, tmp_path, monkeypatch):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"mapping": {"f_min": 220.0}}))
        assert load_config(path).mapping.f_min == 220.0
        monkeypatch.setenv("NL_CONFIG", str(path))
        assert load_config().mapping.f_min == 220.0

    def test_overridden_thresholds_flow_through(self):
        cfg = config_from_dict({"wand": {"key_step": 0.25}})
        a = key_to_action("W", cfg)
        assert a.dy == pytest.approx(0.25)


@pytest.fixture
def live_engine():
    base = EngineConfig()
    cfg = dataclasses.replace(
        base,
        ingest=dataclasses.replace(base.ingest, listen_addr="127.0.0.1", listen_port=0),
        engine=dataclasses.replace(base.engine, ws_port=0, audio=False, broadcast_hz=60.0),
    )
    engine = LiveEngine(cfg, no_audio=True)
    engine.start()
    thread = threading.Thread(target=engine.run_control_loop, daemon=True)
    thread.start()
    yield engine
    engine.stop()
    thread.join(timeout=2)


class TestLiveLoopback:
    def test_ws_key_moves_wand(self, live_engine):
        from websockets.sync.client import connect

        with connect(f"ws://127.0.0.1:{live_engine.broadcaster.port}") as ws:
            first = json.loads(ws.recv(timeout=2))
            y0 = [w for w in first["wands"] if w["side"] == "L"][0]["y"]
            ws.send(json.dumps({"type": "key", "code": "W"}))
            deadline = time.time() + 2.0
            while time.time() < deadline:
                msg = json.loads(ws.recv(timeout=2))
                y = [w for w in msg["wands"] if w["side"] == "L"][0]["y"]
                if y > y0:
                    break
            else:
                pytest.fail("wand never moved")
            assert y == pytest.approx(y0 + 0.05)

    def test_udp_frames_move_wand(self, live_engine):
        port = live_engine.ingest.port
        sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        for i, x in enumerate([0.3, 0.35, 0.4, 0.45]):
            frame = make_hand(centroid=(x, 0.5), seq=i, side="L")
            sock.sendto(encode_frame(frame), ("127.0.0.1", port))
            time.sleep(0.03)
        deadline = time.time() + 2.0
        while time.time() < deadline:
            snap = live_engine.broadcaster.latest
            if snap is not None and snap.scene.left.x > 0.55:
                return
            time.sleep(0.02)
        pytest.fail("UDP frames did not move the wand")

    def test_snapshot_consistency_under_load(self, live_engine):
        for _ in range(20):
            snap = live_engine.broadcaster.latest
            if snap is not None:
                assert snap.params == map_scene(snap.scene, live_engine.cfg.mapping)
            time.sleep(0.005)
