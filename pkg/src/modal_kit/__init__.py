"""Dominant low-frequency oscillation mode identification in grid frequency records.

Six estimators share one set of types: a Gaussian-windowed FFT, least-squares
Prony, the Matrix Pencil, the Stockwell transform, the Morlet global wavelet
spectrum and the Hilbert marginal spectrum of an empirical mode
decomposition. :mod:`modal_kit.harness` runs them side by side.
"""

from .core import (
    Band,
    Mode,
    PowerSpectrum,
    TimeFrequencyMap,
    TimeSeries,
    detrend,
    mode_energy,
    reconstruct,
    slice_window,
    validate_series,
)
from .fourier import FourierConfig, dominant_mode_fft, power_spectrum
from .hht import HhtConfig, dominant_mode_hms, emd, hilbert_analytic, hilbert_marginal_spectrum
from .matrix_pencil import (
    PencilConfig,
    dominant_mode_mpm,
    pencil_fit,
    reconstruct_mpm,
    sliding_dominant,
)
from .prony import PronyConfig, dominant_mode_prony, prony_energy_spectrum, prony_fit
from .stransform import dominant_mode_st, stransform
from .synth import SynthSpec, default_scenario, generate_ringdown
from .wavelet_gws import WaveletConfig, cwt_morlet, dominant_mode_gws, global_wavelet_spectrum

__version__ = "0.1.0"
