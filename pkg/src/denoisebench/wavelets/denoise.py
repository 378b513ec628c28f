"""End-to-end wavelet denoising: transform, threshold, shrink, invert."""

from __future__ import annotations

from dataclasses import dataclass

from ..audio import AudioBuffer
from .filters import FAMILIES, wavelet_filters
from .thresholds import apply_threshold, balance_sparsity_threshold, universal_threshold
from .transform import dwt, reconstruct, wpt


@dataclass(frozen=True)
class WaveletConfig:
    family: str = "sym15"
    kind: str = "wpt"         # dwt | wpt
    levels: int = 5
    method: str = "universal"  # universal | balance_sparsity
    mode: str = "hard"         # soft | hard

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown wavelet family {self.family!r}")
        if self.kind not in ("dwt", "wpt"):
            raise ValueError(f"unknown transform kind {self.kind!r}")
        if self.method not in ("universal", "balance_sparsity"):
            raise ValueError(f"unknown threshold method {self.method!r}")

    @property
    def variant(self) -> str:
        return f"{self.family}-{self.kind}-{self.method}-{self.mode}"


def denoise_wavelet(noisy: AudioBuffer, config: WaveletConfig) -> AudioBuffer:
    filt = wavelet_filters(config.family)
    transform = dwt if config.kind == "dwt" else wpt
    decomp = transform(noisy, filt, config.levels)
    if config.method == "universal":
        spec = universal_threshold(decomp, config.mode)
    else:
        spec = balance_sparsity_threshold(decomp, config.mode)
    out = reconstruct(apply_threshold(decomp, spec), filt, noisy.sample_rate)
    assert len(out) == len(noisy)
    return out
