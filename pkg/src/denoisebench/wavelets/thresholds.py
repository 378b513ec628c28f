"""Threshold estimation and shrinkage for wavelet coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .transform import WaveletDecomposition


@dataclass(frozen=True)
class ThresholdSpec:
    method: str  # universal | balance_sparsity
    mode: str    # soft | hard
    value: float
    sigma_hat: float = 0.0

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("threshold value must be nonnegative")
        if self.mode not in ("soft", "hard"):
            raise ValueError(f"unknown threshold mode {self.mode!r}")


def _detail_coeffs(decomp: WaveletDecomposition) -> np.ndarray:
    return np.concatenate([decomp.bands[i] for i in decomp.detail_band_indices])


def universal_threshold(decomp: WaveletDecomposition, mode: str = "soft") -> ThresholdSpec:
    """Fixed-form threshold sigma_hat * sqrt(2 ln N).

    sigma_hat is the MAD/0.6745 estimate on the finest detail band (d1 for
    DWT, the highest-frequency leaf for WPT); N is the original signal
    length.
    """
    band = decomp.finest_band
    sigma = float(np.median(np.abs(band))) / 0.6745
    value = sigma * math.sqrt(2.0 * math.log(decomp.original_length))
    return ThresholdSpec("universal", mode, value, sigma_hat=sigma)


def balance_sparsity_threshold(decomp: WaveletDecomposition,
                               mode: str = "soft") -> ThresholdSpec:
    """Threshold where retained-energy % meets zeroed-coefficient %.

    Both curves are step functions that change only at coefficient
    magnitudes, so the crossing lies at a candidate point: the smallest
    magnitude t with E(t) <= Z(t), E(t) = 100*sum_{|c|>t} c^2 / sum c^2
    and Z(t) = 100*#{|c|<=t}/M. The approximation band is excluded.
    """
    mags = np.sort(np.abs(_detail_coeffs(decomp)))
    total = float(np.sum(mags ** 2))
    if total == 0.0 or len(mags) == 0:
        return ThresholdSpec("balance_sparsity", mode, 0.0)
    m = len(mags)
    # after sorting, zeroing everything with |c| <= mags[i] drops the
    # first j coefficients where j counts ties through index i
    cum_energy = np.cumsum(mags ** 2)
    value = float(mags[-1])
    for i in range(m):
        if i + 1 < m and mags[i + 1] == mags[i]:
            continue  # evaluate each distinct candidate once, at its last tie
        retained = 100.0 * (total - cum_energy[i]) / total
        zeros = 100.0 * (i + 1) / m
        if retained <= zeros:
            value = float(mags[i])
            break
    return ThresholdSpec("balance_sparsity", mode, value)


def shrink(values: np.ndarray, threshold: float, mode: str) -> np.ndarray:
    """Soft or hard shrinkage of one coefficient array."""
    if mode == "hard":
        return np.where(np.abs(values) > threshold, values, 0.0)
    return np.sign(values) * np.maximum(np.abs(values) - threshold, 0.0)


def apply_threshold(decomp: WaveletDecomposition,
                    spec: ThresholdSpec) -> WaveletDecomposition:
    """Shrink detail/leaf bands; the approximation (all-low-pass) band is
    left untouched."""
    out = decomp.copy()
    for i in out.detail_band_indices:
        out.bands[i] = shrink(out.bands[i], spec.value, spec.mode)
    return out
