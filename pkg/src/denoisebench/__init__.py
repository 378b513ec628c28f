"""Speech noise-reduction benchmark: wavelet denoising, adaptive noise
cancellation with VAD, objective metrics, and a MOS listening-test service."""

from .audio import AudioBuffer, FrameSequence, MixSpec, active_level, frame_signal, mix_at_snr, read_wav, resample_to_8k, write_wav
from .adaptive import AncIo, AdaptiveFilterState, DivergenceError, OptimizerParams, denoise_adaptive, filter_step, init_state
from .metrics import MetricReport, MosRecord, align, mos_aggregate, segmental_snr, snr_db, snr_improvement
from .vad import VadDecision, VadParams, detect, frame_energy, real_cepstrum
from .wavelets import WaveletConfig, denoise_wavelet, wavelet_filters

__version__ = "0.1.0"
