"""Audio rendering: two band-limited sawtooth voices, per-voice low-pass
state-variable filter, smoothed gains, overlap-driven cross-modulation,
and a shared Schroeder reverb with a runtime-controllable decay.

Everything is deterministic given (parameter timeline, config, sample
rate); the per-sample loop is compiled with numba because the two voices
cross-modulate each other through a one-sample feedback path that cannot
be vectorized.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .mapping import SynthParams, VoiceParams

SVF_Q = 1.0 / 0.7071067811865476  # damping for a fixed Butterworth-like Q

# Classic Schroeder/Freeverb-adjacent delays, in samples at 48 kHz.
COMB_DELAYS_48K = (1557, 1617, 1491, 1422)
ALLPASS_DELAYS_48K = (225, 556)
ALLPASS_COEF = 0.5


@dataclass(frozen=True)
class SynthConfig:
    sample_rate: int = 48000
    block_size: int = 256
    smooth_tau_s: float = 0.010
    xmod_depth: float = 0.5
    wet_mix: float = 0.3
    max_comb_gain: float = 0.97
    polyblep: bool = True  # naive saw kept selectable for A/B listening
    f_floor: float = 20.0

    def validate(self) -> None:
        if self.sample_rate < 8000:
            raise ValueError(f"sample_rate too low: {self.sample_rate}")
        if self.block_size < 16 or self.block_size > 8192:
            raise ValueError(f"block_size out of range: {self.block_size}")


# --- reference single-sample operations (used directly by tests and by the
# --- compiled kernel below; keep the two in lockstep) -----------------------


@dataclass
class VoiceState:
    """One oscillator/filter chain."""

    phase: float = 0.0
    freq: float = 0.0
    amp: float = 0.0
    cutoff: float = 1000.0
    low: float = 0.0
    band: float = 0.0
    prev_out: float = 0.0  # post-filter sample, feeds the other voice's FM


@njit(cache=True)
def _polyblep(t: float, dt: float) -> float:
    if t < dt:
        u = t / dt
        return 2.0 * u - u * u - 1.0
    if t > 1.0 - dt:
        u = (t - 1.0) / dt
        return u * u + 2.0 * u + 1.0
    return 0.0


def saw_tick(voice: VoiceState, f_inst: float, sample_rate: float, polyblep: bool = True) -> float:
    """Advance the phase and output one band-limited sawtooth sample."""
    f_inst = min(max(f_inst, 20.0), sample_rate / 2.0 - 1.0)
    dt = f_inst / sample_rate
    voice.phase += dt
    voice.phase -= math.floor(voice.phase)
    y = 2.0 * voice.phase - 1.0
    if polyblep:
        y -= _polyblep(voice.phase, dt)
    return y


def svf_lowpass(voice: VoiceState, x: float, cutoff: float, sample_rate: float) -> float:
    """Chamberlin state-variable low-pass update, fixed Q."""
    cutoff = min(max(cutoff, 50.0), sample_rate / 6.5)
    f = 2.0 * math.sin(math.pi * cutoff / sample_rate)
    voice.low += f * voice.band
    high = x - voice.low - SVF_Q * voice.band
    voice.band += f * high
    return voice.low


def apply_xmod(f_base: float, xmod: float, other_sample: float, depth: float = 0.5) -> float:
    """Instantaneous frequency under cross-modulation by the other voice."""
    return f_base * (1.0 + xmod * depth * other_sample)


def comb_feedback_gain(delay_samples: int, sample_rate: float, rt60: float, cap: float = 0.97) -> float:
    """Feedback for one comb so its tail decays 60 dB in rt60 seconds."""
    d = delay_samples / sample_rate
    return min(10.0 ** (-3.0 * d / rt60), cap)


# --- compiled block kernel --------------------------------------------------


@njit(cache=True)
def _render_kernel(
    vs,  # (2, 7) voice state: phase, freq, amp, cutoff, low, band, prev_out
    targets,  # (2, 3) freq, amp, cutoff targets
    comb_buf, comb_off, comb_len, comb_idx, comb_gain,
    ap_buf, ap_off, ap_len, ap_idx,
    xmod, n, sr, smooth, xmod_depth, wet, use_blep, q, diag, out,
):
    f_lo = 20.0
    f_hi = sr / 2.0 - 1.0
    c_lo = 50.0
    c_hi = sr / 6.5
    for i in range(n):
        prev0 = vs[0, 6]
        prev1 = vs[1, 6]
        s = np.empty(2)
        for v in range(2):
            vs[v, 1] += (targets[v, 0] - vs[v, 1]) * smooth
            vs[v, 2] += (targets[v, 1] - vs[v, 2]) * smooth
            vs[v, 3] += (targets[v, 2] - vs[v, 3]) * smooth

            other = prev1 if v == 0 else prev0
            f_inst = vs[v, 1] * (1.0 + xmod * xmod_depth * other)
            if f_inst < f_lo:
                f_inst = f_lo
                diag[1] += 1
            elif f_inst > f_hi:
                f_inst = f_hi
                diag[1] += 1
            dt = f_inst / sr
            vs[v, 0] += dt
            vs[v, 0] -= math.floor(vs[v, 0])
            y = 2.0 * vs[v, 0] - 1.0
            if use_blep:
                y -= _polyblep(vs[v, 0], dt)

            cutoff = vs[v, 3]
            if cutoff < c_lo:
                cutoff = c_lo
            elif cutoff > c_hi:
                cutoff = c_hi
            f = 2.0 * math.sin(math.pi * cutoff / sr)
            vs[v, 4] += f * vs[v, 5]
            high = y - vs[v, 4] - q * vs[v, 5]
            vs[v, 5] += f * high
            post = vs[v, 4]
            vs[v, 6] = post
            s[v] = post * vs[v, 2]

        dry_l = 0.7 * s[0] + 0.3 * s[1]
        dry_r = 0.3 * s[0] + 0.7 * s[1]

        mono = 0.5 * (dry_l + dry_r)
        rev = 0.0
        for c in range(4):
            j = comb_off[c] + comb_idx[c]
            rd = comb_buf[j]
            comb_buf[j] = mono + comb_gain[c] * rd
            comb_idx[c] += 1
            if comb_idx[c] >= comb_len[c]:
                comb_idx[c] = 0
            rev += rd
        rev *= 0.25
        for a in range(2):
            j = ap_off[a] + ap_idx[a]
            buffered = ap_buf[j]
            ap_out = -ALLPASS_COEF * rev + buffered
            ap_buf[j] = rev + ALLPASS_COEF * ap_out
            ap_idx[a] += 1
            if ap_idx[a] >= ap_len[a]:
                ap_idx[a] = 0
            rev = ap_out
        out[i, 0] = math.tanh(dry_l + wet * rev)
        out[i, 1] = math.tanh(dry_r + wet * rev)


class Synth:
    """Stateful two-voice renderer. Parameter targets change at block
    boundaries; per-sample one-pole smoothing removes zipper noise."""

    def __init__(self, cfg: SynthConfig = SynthConfig()):
        cfg.validate()
        self.cfg = cfg
        sr = cfg.sample_rate
        self._vs = np.zeros((2, 7), dtype=np.float64)
        self._vs[:, 3] = 1000.0
        self._targets = np.zeros((2, 3), dtype=np.float64)
        self._targets[:, 0] = 440.0
        self._targets[:, 2] = 1000.0
        scale = sr / 48000.0
        comb_len = np.array(
            [max(1, round(d * scale)) for d in COMB_DELAYS_48K], dtype=np.int64
        )
        ap_len = np.array(
            [max(1, round(d * scale)) for d in ALLPASS_DELAYS_48K], dtype=np.int64
        )
        self._comb_len = comb_len
        self._comb_off = np.concatenate(([0], np.cumsum(comb_len)[:-1])).astype(np.int64)
        self._comb_buf = np.zeros(int(comb_len.sum()), dtype=np.float64)
        self._comb_idx = np.zeros(4, dtype=np.int64)
        self._comb_gain = np.zeros(4, dtype=np.float64)
        self._ap_len = ap_len
        self._ap_off = np.concatenate(([0], np.cumsum(ap_len)[:-1])).astype(np.int64)
        self._ap_buf = np.zeros(int(ap_len.sum()), dtype=np.float64)
        self._ap_idx = np.zeros(2, dtype=np.int64)
        self._xmod = 0.0
        self._diag = np.zeros(2, dtype=np.int64)  # [nan_resets, freq_clamps]
        self._smooth = 1.0 - math.exp(-1.0 / (cfg.smooth_tau_s * sr))
        self.set_decay(1.0)

    def set_decay(self, rt60: float) -> None:
        for i in range(4):
            self._comb_gain[i] = comb_feedback_gain(
                int(self._comb_len[i]), self.cfg.sample_rate, rt60, self.cfg.max_comb_gain
            )

    def set_params(self, params: SynthParams) -> None:
        for row, vp in ((0, params.left), (1, params.right)):
            self._targets[row, 0] = vp.freq
            self._targets[row, 1] = vp.amp
            self._targets[row, 2] = vp.cutoff
        self._xmod = params.xmod
        self.set_decay(max(params.left.rt60, params.right.rt60))

    @property
    def diagnostics(self) -> dict[str, int]:
        return {"nan_resets": int(self._diag[0]), "freq_clamps": int(self._diag[1])}

    def render_block(self, n: int | None = None) -> np.ndarray:
        """Render one stereo block, float32, shape (n, 2), soft-clipped."""
        n = self.cfg.block_size if n is None else n
        out = np.empty((n, 2), dtype=np.float64)
        _render_kernel(
            self._vs, self._targets,
            self._comb_buf, self._comb_off, self._comb_len, self._comb_idx, self._comb_gain,
            self._ap_buf, self._ap_off, self._ap_len, self._ap_idx,
            self._xmod, n, float(self.cfg.sample_rate), self._smooth,
            self.cfg.xmod_depth, self.cfg.wet_mix, self.cfg.polyblep,
            SVF_Q, self._diag, out,
        )
        if not np.isfinite(self._vs).all():
            bad = ~np.isfinite(self._vs).all(axis=1)
            self._vs[bad] = 0.0
            self._diag[0] += int(bad.sum())
            out = np.nan_to_num(out, nan=0.0, posinf=0.0, neginf=0.0)
        return out.astype(np.float32)


@dataclass(frozen=True)
class TimelineEvent:
    time_s: float
    params: SynthParams


def render_offline(
    timeline: list[TimelineEvent],
    duration_s: float,
    cfg: SynthConfig = SynthConfig(),
) -> np.ndarray:
    """Deterministic offline render. Events take effect at the first block
    boundary at or after their timestamp. Returns (frames, 2) float32."""
    for a, b in zip(timeline, timeline[1:]):
        if b.time_s < a.time_s:
            raise ValueError(f"timeline not sorted at t={b.time_s}")
    synth = Synth(cfg)
    total = int(round(duration_s * cfg.sample_rate))
    out = np.zeros((total, 2), dtype=np.float32)
    ev = 0
    pos = 0
    while pos < total:
        t = pos / cfg.sample_rate
        while ev < len(timeline) and timeline[ev].time_s <= t:
            synth.set_params(timeline[ev].params)
            ev += 1
        n = min(cfg.block_size, total - pos)
        out[pos : pos + n] = synth.render_block(n)
        pos += n
    return out


def silence_params() -> SynthParams:
    off = VoiceParams(freq=440.0, amp=0.0, cutoff=1000.0, rt60=1.0, active=False)
    return SynthParams(left=off, right=off, xmod=0.0)


def write_wav(path, samples: np.ndarray, sample_rate: int) -> None:
    """Write stereo float32 WAV (RIFF format tag 3, with a fact chunk)."""
    data = np.ascontiguousarray(samples, dtype=np.float32)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError(f"expected (frames, 2) samples, got {data.shape}")
    payload = data.astype("<f4").tobytes()
    n_frames = data.shape[0]
    fmt = struct.pack("<HHIIHH", 3, 2, sample_rate, sample_rate * 8, 8, 32)
    chunks = (
        b"fmt " + struct.pack("<I", len(fmt)) + fmt
        + b"fact" + struct.pack("<II", 4, n_frames)
        + b"data" + struct.pack("<I", len(payload)) + payload
    )
    with open(path, "wb") as fh:
        fh.write(b"RIFF" + struct.pack("<I", 4 + len(chunks)) + b"WAVE" + chunks)


def read_wav(path) -> tuple[np.ndarray, int]:
    """Read back a float32 WAV written by write_wav."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:4] != b"RIFF" or raw[8:12] != b"WAVE":
        raise ValueError("not a RIFF/WAVE file")
    off = 12
    sample_rate = None
    data = None
    while off + 8 <= len(raw):
        cid = raw[off : off + 4]
        (size,) = struct.unpack_from("<I", raw, off + 4)
        body = raw[off + 8 : off + 8 + size]
        if cid == b"fmt ":
            tag, channels, sample_rate = struct.unpack_from("<HHI", body, 0)
            if tag != 3 or channels != 2:
                raise ValueError(f"unsupported format tag {tag} / channels {channels}")
        elif cid == b"data":
            data = np.frombuffer(body, dtype="<f4").reshape(-1, 2)
        off += 8 + size + (size % 2)
    if sample_rate is None or data is None:
        raise ValueError("missing fmt or data chunk")
    return data, sample_rate
