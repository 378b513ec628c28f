import numpy as np
import pytest

from denoisebench.adaptive import (
    ALGORITHMS, AdaptiveFilterState, DivergenceError, OptimizerParams,
    denoise_adaptive, filter_step, init_state,
)
from denoisebench.audio import AudioBuffer, mix_at_snr
from denoisebench.metrics import snr_db, snr_improvement
from denoisebench.vad import VadParams, detect

from conftest import speech_like

# Two-step oracle values computed independently with exact rational
# arithmetic from the update equations (order 1, steps (x,d) = (1,1) then
# (0.5, 0.2)); see the derivation comment in each block.
TWO_STEP = {
    # e1, w1, e2, w2
    "lms": (1.0, 0.089999999999999997, 0.155, 0.096975000000000006),
    "nlms": (1.0, 0.089108910891089105, 0.15544554455445544, 0.11601294744859102),
    "afa": (1.0, 2.0, -0.80000000000000004, 1.6000000000000001),
    "anlms": (1.0, 1.7821782178217822, -0.69108910891089104, 0.58606245239908605),
}
# RLS: e1, K1, w1, P1, e2, K2, w2, P2
RLS_STEPS = (1.0, 0.51533110023189899, 0.51533110023189899, 0.51533110023189899,
             -0.057665550115949496, 0.23883733982970898, 0.50155841364238885,
             0.47767467965941796)


def test_init_state_defaults():
    s = init_state(OptimizerParams.defaults("lms"))
    assert len(s.w) == 46 and np.all(s.w == 0)
    s = init_state(OptimizerParams.defaults("rls"))
    assert len(s.w) == 80
    assert np.allclose(np.diag(s.P), 1 / 0.99)
    assert np.allclose(np.diag(s.P), 1.01010, atol=1e-5)
    assert np.all(s.P[~np.eye(80, dtype=bool)] == 0)
    s = init_state(OptimizerParams.defaults("afa"))
    assert len(s.w) == 450 and np.all(s.w_sum == 0) and np.all(s.u_sum == 0)
    s = init_state(OptimizerParams.defaults("anlms"))
    assert len(s.w) == 200
    assert init_state(OptimizerParams.defaults("nlms")).w.shape == (70,)


def test_bad_params():
    with pytest.raises(ValueError):
        OptimizerParams(algorithm="lms", order=0)
    with pytest.raises(ValueError):
        OptimizerParams(algorithm="sgd", order=4)


@pytest.mark.parametrize("algo", ["lms", "nlms", "afa", "anlms"])
def test_two_step_oracle(algo):
    p = OptimizerParams.defaults(algo, order=1)
    s = init_state(p)
    e1, w1, e2, w2 = TWO_STEP[algo]
    io, s = filter_step(s, p, 1.0, 1.0)
    assert io.y == 0.0 and abs(io.e - e1) < 1e-12
    assert abs(s.w[0] - w1) < 1e-12
    io, s = filter_step(s, p, 0.5, 0.2)
    assert abs(io.e - e2) < 1e-12
    assert abs(s.w[0] - w2) < 1e-12


def test_rls_two_step_oracle():
    p = OptimizerParams.defaults("rls", order=1)
    s = init_state(p)
    e1, k1, w1, p1, e2, k2, w2, p2 = RLS_STEPS
    io, s = filter_step(s, p, 1.0, 1.0)
    assert abs(io.e - e1) < 1e-12
    assert abs(s.w[0] - w1) < 1e-12
    assert abs(s.P[0, 0] - p1) < 1e-12
    io, s = filter_step(s, p, 0.5, 0.2)
    assert abs(io.e - e2) < 1e-12
    assert abs(s.w[0] - w2) < 1e-12
    assert abs(s.P[0, 0] - p2) < 1e-12


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_zero_state_passthrough(algo):
    p = OptimizerParams.defaults(algo)
    s = init_state(p)
    io, s = filter_step(s, p, 0.0, 0.7)
    assert io.y == 0.0 and io.e == 0.7


def test_error_identity(rng):
    p = OptimizerParams.defaults("nlms", order=4)
    s = init_state(p)
    for _ in range(50):
        x, d = rng.uniform(-1, 1, 2)
        io, s = filter_step(s, p, x, d)
        assert io.e == io.d - io.y


def test_divergence_raises():
    p = OptimizerParams(algorithm="lms", order=8, mu=1e6)
    s = init_state(p)
    with pytest.raises(DivergenceError) as exc:
        for i in range(1000):
            _, s = filter_step(s, p, np.sin(i), np.cos(i))
    assert exc.value.algorithm == "lms"
    assert exc.value.step >= 1


def test_rls_p_stays_symmetric_pd(rng):
    p = OptimizerParams.defaults("rls", order=8)
    s = init_state(p)
    for i in range(10_000):
        _, s = filter_step(s, p, float(rng.uniform(-1, 1)),
                           float(rng.uniform(-1, 1)))
        if i % 500 == 0:
            assert np.max(np.abs(s.P - s.P.T)) < 1e-8
            np.linalg.cholesky(s.P)  # raises if not positive definite
    np.linalg.cholesky(s.P)


def test_determinism(rng):
    clean, _ = speech_like(rng, duration=1.0)
    noise = AudioBuffer(np.random.default_rng(7).standard_normal(len(clean)) * 0.2,
                        8000)
    noisy, _ = mix_at_snr(clean, noise, 5.0)
    vad = detect(noisy, VadParams())
    a = denoise_adaptive(noisy, OptimizerParams.defaults("nlms"), vad)
    b = denoise_adaptive(noisy, OptimizerParams.defaults("nlms"), vad)
    assert np.array_equal(a.samples, b.samples)


@pytest.mark.parametrize("algo", ALGORITHMS)
def test_stability_reference_defaults(rng, algo):
    # bounded input, full 8 s utterance, no NaN/Inf (divergence would raise)
    clean, _ = speech_like(rng, duration=8.0, amplitude=0.4)
    noise = AudioBuffer(rng.uniform(-0.2, 0.2, len(clean)), 8000)
    noisy, _ = mix_at_snr(clean, noise, 5.0)
    noisy = AudioBuffer(np.clip(noisy.samples, -1, 1), 8000)
    vad = detect(noisy, VadParams())
    out = denoise_adaptive(noisy, OptimizerParams.defaults(algo), vad)
    assert np.all(np.isfinite(out.samples))


def _sysid(algo, n_steps=10_000, **overrides):
    rng = np.random.default_rng(42)
    target = rng.standard_normal(10) * 0.5
    p = OptimizerParams.defaults(algo, order=10, **overrides)
    s = init_state(p)
    x = rng.standard_normal(n_steps)
    d = np.convolve(x, target)[:n_steps]
    for i in range(n_steps):
        _, s = filter_step(s, p, float(x[i]), float(d[i]))
    return float(np.linalg.norm(s.w - target))


def test_system_identification():
    assert _sysid("nlms") < 0.05
    assert _sysid("rls", gamma=0.9995) < 0.05
    assert _sysid("lms", mu=0.01) < 0.1


def test_vad_reference_needs_unvoiced():
    buf = AudioBuffer(np.zeros(4000), 8000)
    vad = detect(buf, VadParams())
    flags = np.ones_like(vad.flags)
    from denoisebench.vad import VadDecision
    all_voiced = VadDecision(flags=flags, threshold_trace=vad.threshold_trace,
                             feature_trace=vad.feature_trace,
                             frame_len=vad.frame_len, hop=vad.hop)
    with pytest.raises(ValueError, match="unvoiced"):
        denoise_adaptive(buf, OptimizerParams.defaults("nlms"), all_voiced)


def test_zero_input_zero_output():
    buf = AudioBuffer(np.zeros(4000), 8000)
    vad = detect(buf, VadParams())
    out = denoise_adaptive(buf, OptimizerParams.defaults("nlms"), vad)
    assert np.all(out.samples == 0)


def test_external_reference_validation(rng):
    noisy = AudioBuffer(rng.uniform(-1, 1, 1000), 8000)
    with pytest.raises(ValueError):
        denoise_adaptive(noisy, OptimizerParams.defaults("nlms"),
                         mode="external_reference",
                         reference=AudioBuffer(np.zeros(500), 8000))
    with pytest.raises(ValueError):
        denoise_adaptive(noisy, OptimizerParams.defaults("nlms"), mode="bogus")


def test_clean_input_near_transparent(rng):
    # no noise: reference is (near) silence, filter learns ~0 mapping
    clean, _ = speech_like(rng, duration=2.0)
    vad = detect(clean, VadParams())
    out = denoise_adaptive(clean, OptimizerParams.defaults("nlms"), vad)
    tail = slice(len(clean) // 4, None)  # skip convergence window
    assert snr_db(AudioBuffer(clean.samples[tail], 8000),
                  AudioBuffer(out.samples[tail], 8000)) >= 20.0
