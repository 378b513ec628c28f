import numpy as np
import pytest

from denoisebench.audio import AudioBuffer

SR = 8000


def speech_like(rng, duration=2.0, sr=SR, amplitude=0.5):
    """Synthetic utterance: silence / voiced-burst pattern with a known
    per-sample voiced mask. Bursts are modulated harmonic tones."""
    n = int(duration * sr)
    x = np.zeros(n)
    mask = np.zeros(n, dtype=bool)
    t = np.arange(n) / sr
    # (start_s, end_s) voiced segments; leading 0.4 s stays silent for VAD init
    total = duration
    segments = []
    pos = 0.4
    while pos + 0.35 < total:
        segments.append((pos, min(pos + 0.35, total - 0.05)))
        pos += 0.6
    for f0, (a, b) in zip((120.0, 180.0, 150.0, 210.0, 135.0), segments):
        i, j = int(a * sr), int(b * sr)
        seg_t = t[i:j]
        env = np.sin(np.pi * np.linspace(0, 1, j - i)) ** 2
        tone = sum(np.sin(2 * np.pi * f0 * k * seg_t + 0.7 * k) / k
                   for k in (1, 2, 3, 4))
        x[i:j] = amplitude * env * tone
        mask[i:j] = True
    return AudioBuffer(x, sr), mask


def white_noise(rng, n, level=0.05, sr=SR):
    return AudioBuffer(rng.standard_normal(n) * level, sr)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def sentence(rng):
    buf, mask = speech_like(rng)
    return buf


@pytest.fixture
def sentence_with_mask(rng):
    return speech_like(rng)


# Criterion verdicts collected by test_acceptance.py; echoed after the run
# (outside pytest's output capture) so a full log always ends with the
# acceptance checklist.
ACCEPTANCE_VERDICTS = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.write_line(line)
