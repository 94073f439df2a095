"""Morlet continuous wavelet transform and the global wavelet spectrum.

The transform follows the usual frequency-domain construction: for each scale
the zero-padded record spectrum is multiplied by the analytic Morlet
``pi**-0.25 * exp(-(s*w - omega0)**2 / 2)`` normalized by ``sqrt(2*pi*s/dt)``.
Scales form a geometric grid ``s0 * 2**(j*dj)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Band, PowerSpectrum, TimeFrequencyMap, TimeSeries, band_peak


@dataclass(frozen=True)
class WaveletConfig:
    """
    Parameters
    ----------
    omega0 : float
        Morlet nondimensional frequency.
    s0 : float or None
        Smallest scale in seconds; ``2 * dt`` when ``None``.
    dj : float
        Scale spacing in octaves.
    n_scales : int or None
        Number of scales; by default enough to reach the record length.
    use_coi : bool
        Average only cells inside the cone of influence. ``False`` averages
        over every time, as a plain time average would.
    """

    omega0: float = 6.0
    s0: float | None = None
    dj: float = 1.0 / 16
    n_scales: int | None = None
    use_coi: bool = True

    def __post_init__(self):
        if self.omega0 < 5:
            raise ValueError("omega0 must be >= 5 for an admissible Morlet")
        if not 0 < self.dj <= 0.5:
            raise ValueError("dj must be in (0, 0.5]")


def fourier_factor(omega0: float = 6.0) -> float:
    """Equivalent Fourier period per unit scale."""
    return 4 * math.pi / (omega0 + math.sqrt(2 + omega0 ** 2))


def scale_to_frequency(scale, omega0: float = 6.0):
    return 1.0 / (fourier_factor(omega0) * np.asarray(scale))


def frequency_to_scale(freq, omega0: float = 6.0):
    return 1.0 / (fourier_factor(omega0) * np.asarray(freq))


def wavelet_scales(series: TimeSeries, cfg: WaveletConfig = WaveletConfig()) -> np.ndarray:
    s0 = cfg.s0 if cfg.s0 is not None else 2 * series.dt
    if cfg.n_scales is not None:
        count = cfg.n_scales
    else:
        count = int(math.floor(math.log2(series.n * series.dt / s0) / cfg.dj)) + 1
    return s0 * 2.0 ** (np.arange(max(count, 1)) * cfg.dj)


def cone_of_influence(n: int, dt: float, scales: np.ndarray) -> np.ndarray:
    """Boolean ``(scales, times)`` mask, True where ``sqrt(2)*s`` fits before either edge."""
    edge_dist = dt * np.minimum(np.arange(n), np.arange(n)[::-1])
    return math.sqrt(2) * scales[:, None] <= edge_dist[None, :]


def cwt_morlet(series: TimeSeries, cfg: WaveletConfig = WaveletConfig()) -> TimeFrequencyMap:
    """Complex Morlet CWT with rows on an ascending frequency axis."""
    x = series.samples
    n = series.n
    npad = 1 << (n - 1).bit_length()
    xhat = np.fft.fft(x, npad)
    omega = 2 * np.pi * np.fft.fftfreq(npad, series.dt)
    scales = wavelet_scales(series, cfg)

    arg = scales[:, None] * omega[None, :]
    daughter = np.where(omega > 0, np.pi ** -0.25 * np.exp(-0.5 * (arg - cfg.omega0) ** 2), 0.0)
    daughter *= np.sqrt(2 * np.pi * scales / series.dt)[:, None]
    coeffs = np.fft.ifft(xhat[None, :] * daughter, axis=1)[:, :n]

    mask = cone_of_influence(n, series.dt, scales)
    # small scales first means high frequencies first; flip to ascending
    return TimeFrequencyMap(series.times, scale_to_frequency(scales, cfg.omega0)[::-1],
                            coeffs[::-1], mask[::-1])


def global_wavelet_spectrum(tfmap: TimeFrequencyMap, use_coi: bool = True) -> PowerSpectrum:
    """Time average of ``|W|**2`` per frequency row.

    With ``use_coi`` the average covers only cells inside the cone of
    influence, and rows with no such cell are left out of the spectrum.
    """
    power = tfmap.power
    if not use_coi or tfmap.mask is None:
        return PowerSpectrum(tfmap.freqs, power.mean(axis=1))
    counts = tfmap.mask.sum(axis=1)
    rows = counts > 0
    sums = np.where(tfmap.mask, power, 0.0).sum(axis=1)
    return PowerSpectrum(tfmap.freqs[rows], sums[rows] / counts[rows])


def dominant_mode_gws(series: TimeSeries, cfg: WaveletConfig = WaveletConfig(),
                      band: Band = Band()) -> tuple[float, PowerSpectrum]:
    """GWS peak inside ``band``, refined on the log-frequency grid."""
    gws = global_wavelet_spectrum(cwt_morlet(series, cfg), cfg.use_coi)
    return band_peak(gws.freqs, gws.power, band, log_freq=True), gws
