"""Objective scoring (SNR, segmental SNR, alignment) and MOS aggregation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import signal as sps

from .audio import AudioBuffer

SNR_FLOOR_DB = -20.0
SNR_CEIL_DB = 60.0
SEG_FLOOR_DB = -10.0
SEG_CEIL_DB = 35.0


@dataclass(frozen=True)
class MetricReport:
    input_snr_db: float
    output_snr_db: float
    improvement_db: float
    segsnr_db: float
    lag: int
    algorithm: str = ""
    variant: str = ""
    file: str = ""


@dataclass(frozen=True)
class MosRecord:
    rater: str
    clip: str
    algorithm: str
    score: int
    timestamp: float = 0.0

    def __post_init__(self):
        if not 0 <= int(self.score) <= 10:
            raise ValueError("MOS score must be in [0, 10]")


@dataclass(frozen=True)
class MosSummary:
    algorithm: str
    mean: float
    n: int
    stddev: float


def align(clean: AudioBuffer, processed: AudioBuffer, max_lag: int = 512) -> int:
    """Lag (samples) maximizing |cross-correlation| within [-max_lag, max_lag].

    Positive lag means `processed` is delayed relative to `clean`.
    """
    if clean.sample_rate != processed.sample_rate:
        raise ValueError("sample rates differ")
    a, b = clean.samples, processed.samples
    if not np.any(a) or not np.any(b):
        raise ValueError("zero-energy input to align")
    corr = sps.correlate(b, a, mode="full", method="fft")
    lags = sps.correlation_lags(len(b), len(a), mode="full")
    keep = np.abs(lags) <= max_lag
    return int(lags[keep][np.argmax(np.abs(corr[keep]))])


def _overlap(clean: AudioBuffer, processed: AudioBuffer,
             lag: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Shift processed back by `lag` and truncate both to equal length."""
    p = processed.samples[lag:] if lag >= 0 else processed.samples
    c = clean.samples if lag >= 0 else clean.samples[-lag:]
    n = min(len(c), len(p))
    return c[:n], p[:n]


def snr_db(clean: AudioBuffer, processed: AudioBuffer) -> float:
    """10 log10(sum c^2 / sum (c-p)^2), clamped to [-20, 60] dB."""
    c, p = _overlap(clean, processed)
    sig = float(np.sum(c ** 2))
    if sig == 0.0:
        raise ValueError("zero-energy clean signal")
    err = float(np.sum((c - p) ** 2))
    if err == 0.0:
        return SNR_CEIL_DB
    return float(np.clip(10.0 * math.log10(sig / err), SNR_FLOOR_DB, SNR_CEIL_DB))


def segmental_snr(clean: AudioBuffer, processed: AudioBuffer,
                  frame_len: int = 160) -> float:
    """Mean of per-frame SNRs, each clamped to [-10, 35] dB.

    Frames with clean energy below 1e-8 are excluded.
    """
    c, p = _overlap(clean, processed)
    n_frames = len(c) // frame_len
    vals = []
    for k in range(n_frames):
        cf = c[k * frame_len:(k + 1) * frame_len]
        pf = p[k * frame_len:(k + 1) * frame_len]
        sig = float(np.sum(cf ** 2))
        if sig < 1e-8:
            continue
        err = float(np.sum((cf - pf) ** 2))
        if err == 0.0:
            vals.append(SEG_CEIL_DB)
        else:
            vals.append(float(np.clip(10.0 * math.log10(sig / err),
                                      SEG_FLOOR_DB, SEG_CEIL_DB)))
    if not vals:
        raise ValueError("no frames with usable clean energy")
    return float(np.mean(vals))


def snr_improvement(clean: AudioBuffer, noisy: AudioBuffer,
                    denoised: AudioBuffer, *, algorithm: str = "",
                    variant: str = "", file: str = "",
                    max_lag: int = 512) -> MetricReport:
    """Full report: input SNR, aligned output SNR, improvement, segmental SNR."""
    lag = align(clean, denoised, max_lag)
    shifted = AudioBuffer(denoised.samples[lag:] if lag >= 0 else
                          np.concatenate([np.zeros(-lag), denoised.samples]),
                          denoised.sample_rate)
    input_snr = snr_db(clean, noisy)
    output_snr = snr_db(clean, shifted)
    return MetricReport(
        input_snr_db=input_snr,
        output_snr_db=output_snr,
        improvement_db=output_snr - input_snr,
        segsnr_db=segmental_snr(clean, shifted),
        lag=lag,
        algorithm=algorithm, variant=variant, file=file,
    )


def mos_aggregate(records: list[MosRecord]) -> list[MosSummary]:
    """Per-algorithm mean, count, and standard deviation of MOS scores."""
    if not records:
        raise ValueError("no MOS records")
    by_algo: dict[str, list[int]] = {}
    for r in records:
        by_algo.setdefault(r.algorithm, []).append(int(r.score))
    out = []
    for algo in sorted(by_algo):
        scores = np.array(by_algo[algo], dtype=np.float64)
        out.append(MosSummary(algorithm=algo, mean=float(scores.mean()),
                              n=len(scores),
                              stddev=float(scores.std(ddof=0))))
    return out
