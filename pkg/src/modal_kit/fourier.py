"""Gaussian-windowed Fourier power spectrum and dominant-peak picking."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Band, PowerSpectrum, TimeSeries, band_peak


@dataclass(frozen=True)
class FourierConfig:
    """
    Parameters
    ----------
    gaussian_window_factor : float
        Window standard deviation as a fraction of the half frame,
        ``sigma = factor * (N - 1) / 2`` samples.
    zero_pad_factor : int
        FFT length is ``zero_pad_factor * N``.
    """

    gaussian_window_factor: float = 0.3
    zero_pad_factor: int = 4

    def __post_init__(self):
        if not 0 < self.gaussian_window_factor <= 1:
            raise ValueError("gaussian_window_factor must be in (0, 1]")
        if int(self.zero_pad_factor) != self.zero_pad_factor or self.zero_pad_factor < 1:
            raise ValueError("zero_pad_factor must be an integer >= 1")


def gaussian_window(n: int, factor: float) -> np.ndarray:
    half = (n - 1) / 2.0
    sigma = factor * half
    return np.exp(-0.5 * ((np.arange(n) - half) / sigma) ** 2)


def windowed_frame(series: TimeSeries, cfg: FourierConfig = FourierConfig()) -> np.ndarray:
    return series.samples * gaussian_window(series.n, cfg.gaussian_window_factor)


def power_spectrum(series: TimeSeries, cfg: FourierConfig = FourierConfig()) -> PowerSpectrum:
    """One-sided ``|X[k]|**2`` of the windowed, zero-padded record."""
    m = int(cfg.zero_pad_factor) * series.n
    spec = np.fft.rfft(windowed_frame(series, cfg), n=m)
    freqs = np.fft.rfftfreq(m, d=series.dt)
    return PowerSpectrum(freqs, spec.real ** 2 + spec.imag ** 2)


def dominant_mode_fft(series: TimeSeries, cfg: FourierConfig = FourierConfig(),
                      band: Band = Band()) -> tuple[float, PowerSpectrum]:
    """Peak of the power spectrum inside ``band`` with log-parabolic refinement.

    Returns the refined frequency and the full one-sided spectrum.
    """
    ps = power_spectrum(series, cfg)
    return band_peak(ps.freqs, ps.power, band), ps
