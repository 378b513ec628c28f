import numpy as np
import pytest

from denoisebench.audio import AudioBuffer
from denoisebench.wavelets.filters import FAMILIES, wavelet_filters
from denoisebench.wavelets.transform import (
    WaveletDecomposition, _natural_index_of_highest_freq, dwt, reconstruct, wpt,
)

EXPECTED_LENGTHS = {"haar": 2, "db5": 10, "db10": 20, "db15": 30,
                    "sym5": 10, "sym10": 20, "sym15": 30,
                    "coif3": 18, "coif4": 24}


@pytest.mark.parametrize("family", FAMILIES)
def test_filter_invariants(family):
    wf = wavelet_filters(family)
    L = len(wf.h)
    assert L == EXPECTED_LENGTHS[family]
    assert abs(wf.h.sum() - np.sqrt(2)) < 1e-10
    for m in range(L // 2):
        acc = np.dot(wf.h[:L - 2 * m] if m else wf.h, wf.h[2 * m:])
        assert abs(acc - (1.0 if m == 0 else 0.0)) < 1e-8, (family, m)
    # quadrature mirror relation
    signs = (-1.0) ** np.arange(L)
    assert np.allclose(wf.g, signs * wf.h[::-1], atol=0)
    # reconstruction filters are the time-reversed decomposition pair
    assert np.array_equal(wf.h_r, wf.h[::-1])
    assert np.array_equal(wf.g_r, wf.g[::-1])


def test_haar_values():
    wf = wavelet_filters("haar")
    r = 2 ** -0.5
    assert np.allclose(wf.h, [r, r], atol=1e-12)
    assert np.allclose(wf.g, [r, -r], atol=1e-12)


def test_unknown_family():
    with pytest.raises(ValueError):
        wavelet_filters("db99")


def test_haar_hand_case():
    buf = AudioBuffer(np.array([4.0, 4.0, 2.0, 2.0]), 8000)
    d = dwt(buf, wavelet_filters("haar"), 1)
    assert np.allclose(d.bands[0], [5.65685425, 2.82842712], atol=1e-6)
    assert np.allclose(d.bands[1], [0.0, 0.0], atol=1e-12)


def test_zero_signal():
    buf = AudioBuffer(np.zeros(64), 8000)
    d = dwt(buf, wavelet_filters("db5"), 5)
    assert all(np.all(b == 0) for b in d.bands)


@pytest.mark.parametrize("family", ["haar", "db15", "coif4"])
@pytest.mark.parametrize("kind", ["dwt", "wpt"])
def test_perfect_reconstruction(family, kind, rng):
    wf = wavelet_filters(family)
    transform = dwt if kind == "dwt" else wpt
    for seed in range(5):
        x = np.random.default_rng(seed).standard_normal(4096)
        buf = AudioBuffer(x, 8000)
        back = reconstruct(transform(buf, wf, 5), wf)
        assert np.max(np.abs(back.samples - x)) < 1e-8


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("kind", ["dwt", "wpt"])
def test_parseval(family, kind, rng):
    wf = wavelet_filters(family)
    x = rng.standard_normal(2048)
    d = (dwt if kind == "dwt" else wpt)(AudioBuffer(x, 8000), wf, 5)
    sig_energy = float(np.sum(x ** 2))
    assert abs(d.coefficient_energy() - sig_energy) / sig_energy < 1e-8


def test_coefficient_count_padded(rng):
    x = rng.standard_normal(1000)  # not a multiple of 32
    d = dwt(AudioBuffer(x, 8000), wavelet_filters("db5"), 5)
    assert sum(len(b) for b in d.bands) == d.padded_length == 1024
    assert d.original_length == 1000
    back = reconstruct(d, wavelet_filters("db5"))
    assert len(back) == 1000
    assert np.max(np.abs(back.samples - x)) < 1e-8


def test_wpt_depth1_equals_dwt_level1(rng):
    wf = wavelet_filters("sym5")
    x = AudioBuffer(rng.standard_normal(256), 8000)
    dd = dwt(x, wf, 1)
    dp = wpt(x, wf, 1)
    assert np.allclose(dp.bands[0], dd.bands[0], atol=1e-12)
    assert np.allclose(dp.bands[1], dd.bands[1], atol=1e-12)


def test_wpt_leaf_count(rng):
    d = wpt(AudioBuffer(rng.standard_normal(4096), 8000),
            wavelet_filters("db10"), 5)
    assert len(d.bands) == 32
    assert all(len(b) == 128 for b in d.bands)


def test_highest_freq_leaf_is_noise_band():
    # a near-Nyquist tone must land in the designated leaf
    sr = 8000
    t = np.arange(4096) / sr
    tone = AudioBuffer(np.sin(2 * np.pi * 3950 * t), sr)
    d = wpt(tone, wavelet_filters("db10"), 5)
    energies = [float(np.sum(b ** 2)) for b in d.bands]
    assert int(np.argmax(energies)) == _natural_index_of_highest_freq(5) == 16
    # and a near-DC tone in leaf 0
    low = AudioBuffer(np.sin(2 * np.pi * 40 * t), sr)
    d = wpt(low, wavelet_filters("db10"), 5)
    assert int(np.argmax([np.sum(b ** 2) for b in d.bands])) == 0


def test_family_mismatch(rng):
    d = dwt(AudioBuffer(rng.standard_normal(64), 8000), wavelet_filters("haar"), 2)
    with pytest.raises(ValueError):
        reconstruct(d, wavelet_filters("db5"))


def test_short_and_empty_signals():
    with pytest.raises(ValueError):
        dwt(AudioBuffer(np.zeros(0), 8000), wavelet_filters("haar"), 1)
    with pytest.raises(ValueError):
        dwt(AudioBuffer(np.zeros(16), 8000), wavelet_filters("haar"), 5)
