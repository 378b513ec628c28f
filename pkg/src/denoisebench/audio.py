"""Audio containers, WAV I/O, resampling, framing, and SNR-controlled mixing."""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy import signal as sps


class WavFormatError(ValueError):
    """Malformed or unparseable RIFF/WAVE header."""


class WavChannelError(ValueError):
    """More than one channel."""


class WavEncodingError(ValueError):
    """Sample encoding other than PCM16 or IEEE float32."""


@dataclass(frozen=True)
class AudioBuffer:
    """Mono sampled signal, float amplitudes nominally in [-1, 1]."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError("AudioBuffer is mono: samples must be 1-D")
        if not np.all(np.isfinite(samples)):
            raise ValueError("AudioBuffer samples must be finite")
        if int(self.sample_rate) <= 0:
            raise ValueError("sample_rate must be positive")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    def __len__(self):
        return len(self.samples)

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


@dataclass(frozen=True)
class FrameSequence:
    """Fixed-length analysis frames cut from one buffer."""

    frames: np.ndarray  # shape (n_frames, frame_len)
    frame_len: int
    hop: int
    source_rate: int
    padded_last: bool  # final frame was zero-padded
    source_len: int

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]


@dataclass(frozen=True)
class MixSpec:
    """Record of one SNR-targeted noise mix."""

    target_snr_db: float
    noise_gain: float


def read_wav(path) -> AudioBuffer:
    """Read a mono PCM16 or IEEE-float32 WAV file.

    PCM16 samples are scaled by 1/32768; float data is taken as-is.
    """
    raw = Path(path).read_bytes()
    if len(raw) < 12 or raw[:4] != b"RIFF" or raw[8:12] != b"WAVE":
        raise WavFormatError(f"{path}: not a RIFF/WAVE file")
    pos = 12
    fmt = None
    data = None
    while pos + 8 <= len(raw):
        cid = raw[pos:pos + 4]
        (size,) = struct.unpack_from("<I", raw, pos + 4)
        body = raw[pos + 8:pos + 8 + size]
        if cid == b"fmt ":
            if len(body) < 16:
                raise WavFormatError(f"{path}: truncated fmt chunk")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif cid == b"data":
            data = body
        pos += 8 + size + (size & 1)
    if fmt is None or data is None:
        raise WavFormatError(f"{path}: missing fmt or data chunk")
    audio_format, channels, rate, _, _, bits = fmt
    if audio_format == 0xFFFE and len(raw) >= 2:
        # WAVE_FORMAT_EXTENSIBLE: sub-format GUID starts with the format tag
        raise WavEncodingError(f"{path}: extensible WAV not supported")
    if channels != 1:
        raise WavChannelError(f"{path}: expected mono, got {channels} channels")
    if audio_format == 1 and bits == 16:
        samples = np.frombuffer(data, dtype="<i2").astype(np.float64) / 32768.0
    elif audio_format == 3 and bits == 32:
        samples = np.frombuffer(data, dtype="<f4").astype(np.float64)
    else:
        raise WavEncodingError(
            f"{path}: unsupported encoding (format {audio_format}, {bits}-bit); "
            "only PCM16 and IEEE float32 are readable"
        )
    return AudioBuffer(samples, rate)


def write_wav(buf: AudioBuffer, path) -> None:
    """Write PCM16 little-endian mono; amplitudes clamped to [-1, 1]."""
    clipped = np.clip(buf.samples, -1.0, 1.0)
    pcm = np.minimum(np.round(clipped * 32768.0), 32767.0).astype("<i2")
    data = pcm.tobytes()
    hdr = b"RIFF" + struct.pack("<I", 36 + len(data)) + b"WAVE"
    hdr += b"fmt " + struct.pack("<IHHIIHH", 16, 1, 1, buf.sample_rate,
                                 buf.sample_rate * 2, 2, 16)
    hdr += b"data" + struct.pack("<I", len(data))
    Path(path).write_bytes(hdr + data)


def resample_to_8k(buf: AudioBuffer) -> AudioBuffer:
    """Down-sample to 8 kHz through a linear-phase FIR anti-alias filter.

    Cutoff 0.45 * 8000 Hz; an 8 kHz input is returned unchanged.
    """
    if buf.sample_rate < 8000:
        raise ValueError(f"cannot upsample {buf.sample_rate} Hz to 8000 Hz")
    if buf.sample_rate == 8000:
        return buf
    ratio = Fraction(8000, buf.sample_rate)
    up, down = ratio.numerator, ratio.denominator
    inter_rate = buf.sample_rate * up
    cutoff = 0.45 * 8000
    # sharp transition: 60 dB stop by 3900 Hz
    numtaps, beta = sps.kaiserord(60.0, 2 * (3900 - cutoff) / inter_rate)
    numtaps |= 1
    fir = sps.firwin(numtaps, cutoff, window=("kaiser", beta), fs=inter_rate) * up
    out = sps.resample_poly(buf.samples, up, down, window=fir)
    return AudioBuffer(out, 8000)


def frame_signal(buf: AudioBuffer, frame_len: int, hop: int) -> FrameSequence:
    """Cut into fixed-length frames starting every `hop` samples.

    The final partial frame is zero-padded and flagged. Empty input yields
    an empty sequence.
    """
    if frame_len < 1 or hop < 1:
        raise ValueError("frame_len and hop must be >= 1")
    if hop > frame_len:
        raise ValueError("hop must not exceed frame_len")
    x = buf.samples
    if len(x) == 0:
        return FrameSequence(np.zeros((0, frame_len)), frame_len, hop,
                             buf.sample_rate, False, 0)
    n_frames = math.ceil(max(len(x) - frame_len, 0) / hop) + 1
    padded = (n_frames - 1) * hop + frame_len > len(x)
    frames = np.zeros((n_frames, frame_len))
    for k in range(n_frames):
        chunk = x[k * hop:k * hop + frame_len]
        frames[k, :len(chunk)] = chunk
    return FrameSequence(frames, frame_len, hop, buf.sample_rate, padded, len(x))


def _match_noise(noise: np.ndarray, n: int) -> np.ndarray:
    """Truncate noise to n samples, looping end-to-start if shorter."""
    if len(noise) == 0:
        raise ValueError("noise buffer is empty")
    if len(noise) >= n:
        return noise[:n]
    reps = math.ceil(n / len(noise))
    return np.tile(noise, reps)[:n]


def _active_mask(clean: AudioBuffer) -> np.ndarray:
    """Sample-level mask of the speech-active region of `clean`.

    Uses the energy VAD; falls back to all-true when nothing is voiced.
    """
    from .vad import VadParams, detect

    params = VadParams()
    frames = frame_signal(clean, params.frame_len, params.hop)
    mask = np.zeros(len(clean), dtype=bool)
    if frames.n_frames > params.noise_init_frames:
        decision = detect(clean, params)
        for k, flag in enumerate(decision.flags):
            if flag:
                mask[k * params.hop:k * params.hop + params.frame_len] = True
    if not mask.any():
        mask[:] = True
    return mask


def mix_at_snr(clean: AudioBuffer, noise: AudioBuffer,
               target_snr_db: float) -> tuple[AudioBuffer, MixSpec]:
    """Add scaled noise so the mix hits the target SNR over the active region.

    noise_gain = sqrt(P_clean / (P_noise * 10^(snr/10))) with both powers
    measured over the clean signal's VAD-active samples. Noise shorter than
    the clean signal is looped.
    """
    if clean.sample_rate != noise.sample_rate:
        raise ValueError("clean and noise sample rates differ")
    if len(clean) == 0:
        raise ValueError("clean buffer is empty")
    n = _match_noise(noise.samples, len(clean))
    mask = _active_mask(clean)
    p_clean = float(np.mean(clean.samples[mask] ** 2))
    p_noise = float(np.mean(n[mask] ** 2))
    if p_clean == 0.0:
        raise ValueError("clean signal has zero power")
    if p_noise == 0.0:
        raise ValueError("noise signal has zero power")
    gain = math.sqrt(p_clean / (p_noise * 10.0 ** (target_snr_db / 10.0)))
    noisy = AudioBuffer(clean.samples + gain * n, clean.sample_rate)
    return noisy, MixSpec(target_snr_db=float(target_snr_db), noise_gain=gain)


def active_level(buf: AudioBuffer, decisions) -> float:
    """Mean-square level in dB over VAD-active frames.

    Falls back to the whole-signal level when no frame is voiced.
    """
    flags = np.asarray(decisions.flags)
    mask = np.zeros(len(buf), dtype=bool)
    for k, flag in enumerate(flags):
        if flag:
            mask[k * decisions.hop:k * decisions.hop + decisions.frame_len] = True
    if not mask.any():
        mask[:] = True
    p = float(np.mean(buf.samples[mask] ** 2))
    if p == 0.0:
        return -math.inf
    return 10.0 * math.log10(p)
