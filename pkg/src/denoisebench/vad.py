"""Frame-level voiced/unvoiced classification with adaptive thresholds.

Two features: frame energy, and distance of the real cepstrum from a
running noise-cepstrum mean. The first frames are taken as noise-only to
seed the threshold statistics; statistics keep adapting during unvoiced
frames.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .audio import AudioBuffer, frame_signal

_LOG_EPS = 1e-10


@dataclass(frozen=True)
class VadParams:
    frame_len: int = 160
    hop: int = 80
    noise_init_frames: int = 10
    k_sigma: float = 3.0
    smoothing: float = 0.9
    feature: str = "energy"  # energy | cepstral
    n_cepstral: int = 12

    def __post_init__(self):
        if self.noise_init_frames < 1:
            raise ValueError("noise_init_frames must be >= 1")
        if not 0.0 < self.smoothing < 1.0:
            raise ValueError("smoothing must be in (0, 1)")
        if self.feature not in ("energy", "cepstral"):
            raise ValueError(f"unknown VAD feature {self.feature!r}")


@dataclass(frozen=True)
class VadDecision:
    """Per-frame voiced flags plus the traces that produced them."""

    flags: np.ndarray           # {0,1} per frame
    threshold_trace: np.ndarray
    feature_trace: np.ndarray
    frame_len: int
    hop: int

    @property
    def n_frames(self) -> int:
        return len(self.flags)

    def dump_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["frame", "feature", "threshold", "flag"])
            for k in range(self.n_frames):
                w.writerow([k, repr(float(self.feature_trace[k])),
                            repr(float(self.threshold_trace[k])), int(self.flags[k])])


@dataclass(frozen=True)
class CepstrumFrame:
    coefficients: np.ndarray


def frame_energy(frame: np.ndarray) -> float:
    """Mean of squared samples."""
    frame = np.asarray(frame, dtype=np.float64)
    if len(frame) == 0:
        raise ValueError("empty frame")
    return float(np.mean(frame ** 2))


def real_cepstrum(frame: np.ndarray, n_cepstral: int) -> CepstrumFrame:
    """First n_cepstral real cepstrum coefficients of a Hann-windowed frame.

    The frame is zero-padded to the next power of two before the DFT; the
    log magnitude is floored at 1e-10 so silence stays finite.
    """
    frame = np.asarray(frame, dtype=np.float64)
    n_fft = 1
    while n_fft < max(len(frame), 1):
        n_fft *= 2
    windowed = frame * np.hanning(len(frame))
    spectrum = np.abs(np.fft.fft(windowed, n_fft))
    ceps = np.fft.ifft(np.log(spectrum + _LOG_EPS)).real
    return CepstrumFrame(ceps[:n_cepstral].copy())


def _features(frames: np.ndarray, params: VadParams) -> np.ndarray:
    if params.feature == "energy":
        return np.mean(frames ** 2, axis=1)
    # cepstral: c[0] excluded for gain invariance
    return np.stack([real_cepstrum(f, params.n_cepstral).coefficients[1:]
                     for f in frames])


def detect(buf: AudioBuffer, params: VadParams | None = None) -> VadDecision:
    """Classify each frame as voiced (1) or unvoiced (0).

    Threshold is noise mean + k_sigma * noise std, seeded from the first
    noise_init_frames frames and updated exponentially after every unvoiced
    frame. In cepstral mode the feature is the Euclidean distance of
    c[1..n) from the running noise-cepstrum mean.
    """
    params = params or VadParams()
    seq = frame_signal(buf, params.frame_len, params.hop)
    n = seq.n_frames
    if n < params.noise_init_frames:
        raise ValueError(
            f"need at least {params.noise_init_frames} frames, got {n}"
        )
    raw = _features(seq.frames, params)

    flags = np.zeros(n, dtype=np.int64)
    thresholds = np.zeros(n)
    feature_trace = np.zeros(n)
    init = params.noise_init_frames
    a = params.smoothing

    if params.feature == "energy":
        m = float(np.mean(raw[:init]))
        s = float(np.std(raw[:init]))
        feats = raw
    else:
        noise_mean = np.mean(raw[:init], axis=0)
        dists = np.linalg.norm(raw[:init] - noise_mean, axis=1)
        m = float(np.mean(dists))
        s = float(np.std(dists))

    for k in range(n):
        if params.feature == "energy":
            feat = float(feats[k])
        else:
            feat = float(np.linalg.norm(raw[k] - noise_mean))
        threshold = m + params.k_sigma * s
        voiced = k >= init and feat > threshold
        flags[k] = 1 if voiced else 0
        thresholds[k] = threshold
        feature_trace[k] = feat
        if not voiced:
            dev = feat - m
            m = a * m + (1.0 - a) * feat
            s = float(np.sqrt(a * s * s + (1.0 - a) * dev * dev))
            if params.feature == "cepstral":
                noise_mean = a * noise_mean + (1.0 - a) * raw[k]

    return VadDecision(flags=flags, threshold_trace=thresholds,
                       feature_trace=feature_trace,
                       frame_len=params.frame_len, hop=params.hop)
