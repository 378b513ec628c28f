"""Streaming adaptive noise cancellation with five weight-update rules.

Topology: x(n) is the noise reference, d(n) the noisy (desired) signal,
y(n) = w.x_hist the filter output, and the error e(n) = d(n) - y(n) is the
speech estimate. All five optimizers share the output and error
computation and differ only in the weight update.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .audio import AudioBuffer
from .vad import VadDecision

ALGORITHMS = ("lms", "nlms", "rls", "afa", "anlms")

# reference parameter sets per algorithm
_DEFAULTS = {
    "lms": dict(mu=0.09, order=46),
    "nlms": dict(c=0.01, alpha=0.09, order=70),
    "rls": dict(c=0.99, gamma=0.95, order=80),
    "afa": dict(gamma=0.5, order=450),
    # mu and the c-regularized denominator are artifact choices, not
    # stated for this rule; see README
    "anlms": dict(gamma=0.05, c=0.01, mu=0.09, order=200),
}


class DivergenceError(RuntimeError):
    """Weights went NaN/Inf during adaptation."""

    def __init__(self, algorithm: str, step: int):
        super().__init__(f"{algorithm} diverged at step {step}")
        self.algorithm = algorithm
        self.step = step


@dataclass(frozen=True)
class OptimizerParams:
    algorithm: str
    order: int
    mu: float = 0.09
    alpha: float = 0.09
    c: float = 0.01
    gamma: float = 0.95

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.order < 1:
            raise ValueError("order must be >= 1")

    @classmethod
    def defaults(cls, algorithm: str, **overrides) -> "OptimizerParams":
        if algorithm not in _DEFAULTS:
            raise ValueError(f"unknown algorithm {algorithm!r}")
        kw = dict(_DEFAULTS[algorithm])
        kw.update(overrides)
        return cls(algorithm=algorithm, **kw)


@dataclass
class AdaptiveFilterState:
    w: np.ndarray
    x_hist: np.ndarray  # most recent first
    n: int = 0
    P: np.ndarray | None = None        # RLS inverse-correlation matrix
    w_sum: np.ndarray | None = None    # AFA/ANLMS running sums
    u_sum: np.ndarray | None = None


@dataclass(frozen=True)
class AncIo:
    x: float
    d: float
    y: float
    e: float


def init_state(params: OptimizerParams) -> AdaptiveFilterState:
    order = params.order
    state = AdaptiveFilterState(w=np.zeros(order), x_hist=np.zeros(order))
    if params.algorithm == "rls":
        state.P = np.eye(order) / params.c
    elif params.algorithm in ("afa", "anlms"):
        state.w_sum = np.zeros(order)
        state.u_sum = np.zeros(order)
    return state


def filter_step(state: AdaptiveFilterState, params: OptimizerParams,
                x: float, d: float) -> tuple[AncIo, AdaptiveFilterState]:
    """One adaptation step. Mutates and returns the state."""
    if len(state.w) != params.order:
        raise ValueError("state dimensions do not match params.order")
    state.x_hist[1:] = state.x_hist[:-1]
    state.x_hist[0] = x
    state.n += 1
    xh = state.x_hist
    y = float(state.w @ xh)
    e = d - y

    algo = params.algorithm
    if algo == "lms":
        state.w = state.w + params.mu * e * xh
    elif algo == "nlms":
        state.w = state.w + (params.alpha / (params.c + float(xh @ xh))) * e * xh
    elif algo == "rls":
        Px = state.P @ xh
        k = Px / (params.gamma + float(xh @ Px))
        state.w = state.w + k * e
        state.P = (state.P - np.outer(k, xh @ state.P)) / params.gamma
        state.P = (state.P + state.P.T) / 2.0  # keep symmetric
    elif algo == "afa":
        state.w_sum += state.w
        state.u_sum += e * xh
        state.w = state.w_sum / state.n + state.u_sum / (state.n * params.gamma)
    elif algo == "anlms":
        state.w_sum += state.w
        state.u_sum += (params.mu / (params.c + float(xh @ xh))) * e * xh
        state.w = state.w_sum / state.n + state.u_sum / (state.n * params.gamma)

    if not np.all(np.isfinite(state.w)):
        raise DivergenceError(algo, state.n)
    return AncIo(x=x, d=d, y=y, e=e), state


class _NoiseTemplate:
    """Circular replay of concatenated unvoiced-frame samples.

    Frames are appended online: frame k becomes available once the sample
    stream passes its hop boundary. Each unvoiced frame contributes its
    hop-sized chunk so overlapping frames do not duplicate samples.
    """

    def __init__(self, noisy: np.ndarray, vad: VadDecision):
        self.noisy = noisy
        self.vad = vad
        self.buf: list[float] = []
        self.pos = 0
        self.next_frame = 0

    def advance_to(self, sample_index: int) -> None:
        hop = self.vad.hop
        while (self.next_frame < self.vad.n_frames
               and (self.next_frame + 1) * hop <= sample_index):
            k = self.next_frame
            if self.vad.flags[k] == 0:
                chunk = self.noisy[k * hop:(k + 1) * hop]
                self.buf.extend(chunk.tolist())
            self.next_frame += 1

    def draw(self) -> float:
        if not self.buf:
            return 0.0
        v = self.buf[self.pos % len(self.buf)]
        self.pos += 1
        return v


def denoise_adaptive(noisy: AudioBuffer, params: OptimizerParams,
                     vad: VadDecision | None = None,
                     mode: str = "vad_reference",
                     reference: AudioBuffer | None = None) -> AudioBuffer:
    """Run the ANC loop over a whole utterance; returns the error signal.

    vad_reference mode replays samples of unvoiced frames as the noise
    reference; external_reference mode uses a separately captured noise
    channel.
    """
    d = noisy.samples
    if mode == "external_reference":
        if reference is None or len(reference) != len(noisy) \
                or reference.sample_rate != noisy.sample_rate:
            raise ValueError("external_reference mode needs a same-length, "
                             "same-rate reference buffer")
        x_src = reference.samples
        template = None
    elif mode == "vad_reference":
        if vad is None:
            raise ValueError("vad_reference mode needs a VadDecision")
        if not np.any(np.asarray(vad.flags) == 0):
            raise ValueError("no unvoiced frames: record a longer leading "
                             "noise-only segment")
        template = _NoiseTemplate(d, vad)
        x_src = None
    else:
        raise ValueError(f"unknown mode {mode!r}")

    state = init_state(params)
    out = np.empty(len(d))
    for i in range(len(d)):
        if template is not None:
            template.advance_to(i)
            x = template.draw()
        else:
            x = float(x_src[i])
        io, state = filter_step(state, params, x, float(d[i]))
        out[i] = io.e
    return AudioBuffer(out, noisy.sample_rate)
