from .denoise import WaveletConfig, denoise_wavelet
from .filters import FAMILIES, WaveletFilter, wavelet_filters
from .thresholds import ThresholdSpec, apply_threshold, balance_sparsity_threshold, shrink, universal_threshold
from .transform import WaveletDecomposition, dwt, reconstruct, wpt
