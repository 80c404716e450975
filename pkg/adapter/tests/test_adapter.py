import pytest

from wandcap.adapter import Adapter, AdapterConfig

from builders import make_image_hand

from wandsynth.protocol import decode_frame


class CaptureSocket:
    def __init__(self):
        self.datagrams = []

    def sendto(self, data, addr):
        self.datagrams.append((data, addr))


def make_adapter(**cfg_overrides):
    cfg = AdapterConfig(**cfg_overrides)
    sock = CaptureSocket()
    return Adapter(cfg, sock=sock), sock


class TestConfig:
    @pytest.mark.parametrize(
        "field,value",
        [("fps", 0.0), ("fps", 500.0), ("min_confidence", 1.5), ("target_port", 0)],
    )
    def test_rejects_bad_values(self, field, value):
        with pytest.raises(ValueError):
            AdapterConfig(**{field: value}).validate()


class TestHandleHands:
    def test_one_datagram_per_hand(self):
        adapter, sock = make_adapter()
        adapter.handle_hands(
            [make_image_hand(0.4, 0.5, side="L"), make_image_hand(0.6, 0.5, side="R")]
        )
        assert len(sock.datagrams) == 2
        sides = {decode_frame(d).side.value for d, _ in sock.datagrams}
        assert sides == {"L", "R"}

    def test_nothing_sent_for_empty_frame(self):
        adapter, sock = make_adapter()
        adapter.handle_hands([])
        assert sock.datagrams == []

    def test_low_confidence_hand_skipped(self):
        adapter, sock = make_adapter(min_confidence=0.5)
        adapter.handle_hands([make_image_hand(0.5, 0.5, confidence=0.3)])
        assert sock.datagrams == []
        assert adapter.stats.sent == 0

    def test_seq_strictly_increases_per_side(self):
        adapter, sock = make_adapter()
        for _ in range(4):
            adapter.handle_hands(
                [make_image_hand(0.5, 0.5, side="L"), make_image_hand(0.5, 0.5, side="R")]
            )
        for side in "LR":
            seqs = [
                decode_frame(d).seq
                for d, _ in sock.datagrams
                if decode_frame(d).side.value == side
            ]
            assert seqs == [0, 1, 2, 3]

    def test_invalid_landmarks_rejected_not_sent(self):
        adapter, sock = make_adapter()
        bad = make_image_hand(0.5, 0.5)
        bad["points"][3] = [7.0, 0.5, 0.0]
        adapter.handle_hands([bad])
        assert sock.datagrams == []
        assert adapter.stats.rejected == 1

    def test_mirror_convention_on_the_wire(self):
        adapter, sock = make_adapter(mirror=True)
        adapter.handle_hands([make_image_hand(0.3, 0.2)])
        frame = decode_frame(sock.datagrams[0][0])
        # image (0.3, 0.2) -> mirrored x 0.7, flipped y 0.8 at the wrist's MCP row
        xs = [p[0] for p in frame.points]
        ys = [p[1] for p in frame.points]
        assert 0.6 < sum(xs) / len(xs) < 0.8
        assert 0.7 < sum(ys) / len(ys) < 0.9

    def test_target_address_used(self):
        adapter, sock = make_adapter(target_host="10.0.0.9", target_port=9123)
        adapter.handle_hands([make_image_hand(0.5, 0.5)])
        assert sock.datagrams[0][1] == ("10.0.0.9", 9123)
