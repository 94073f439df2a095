"""Discrete Stockwell transform and its time-averaged marginal spectrum.

Each voice ``n`` is obtained in the frequency domain: the spectrum is shifted
by ``n`` bins, multiplied by the Gaussian ``exp(-2 pi^2 m^2 / n^2)`` and
inverse transformed. The window width therefore shrinks as ``1/n``. Summing
any voice over time returns the DFT coefficient ``X[n]``.
"""

from __future__ import annotations

import numpy as np

from .core import Band, PowerSpectrum, TimeFrequencyMap, TimeSeries, band_peak, interior
from .errors import EmptyBand

EDGE_FRACTION = 0.10


def voice_gaussians(n_samples: int, voices: np.ndarray) -> np.ndarray:
    m = np.fft.fftfreq(n_samples) * n_samples
    return np.exp(-2.0 * np.pi ** 2 * m[None, :] ** 2 / voices[:, None].astype(float) ** 2)


def stransform(series: TimeSeries, band: Band | None = None) -> TimeFrequencyMap:
    """S-transform of ``series`` on voices ``0 .. N//2``.

    With ``band`` only voices inside it (plus one neighbour on each side, for
    peak refinement) are computed. Voice 0 holds the signal mean.
    """
    x = series.samples
    n = series.n
    voices = np.arange(n // 2 + 1)
    if band is not None:
        inside = np.flatnonzero(band.contains(voices / (n * series.dt)))
        if inside.size == 0:
            raise EmptyBand(f"no voices inside [{band.f_lo}, {band.f_hi}] Hz")
        voices = voices[max(inside[0] - 1, 0):min(inside[-1] + 2, voices.size)]
    spec = np.fft.fft(x)
    spec2 = np.concatenate([spec, spec])
    out = np.empty((voices.size, n), dtype=complex)
    for row, v in enumerate(voices):
        if v == 0:
            out[row] = x.mean()
            continue
        gauss = voice_gaussians(n, np.array([v]))[0]
        out[row] = np.fft.ifft(spec2[v:v + n] * gauss)
    return TimeFrequencyMap(series.times, voices / (n * series.dt), out)


def st_marginal(tfmap: TimeFrequencyMap, edge_fraction: float = EDGE_FRACTION) -> PowerSpectrum:
    """Time-averaged ``|S|**2`` per voice, edges and the zero voice excluded."""
    keep = tfmap.freqs > 0
    cols = interior(tfmap.times.size, edge_fraction)
    power = tfmap.power[keep][:, cols].mean(axis=1)
    return PowerSpectrum(tfmap.freqs[keep], power)


def dominant_mode_st(tfmap: TimeFrequencyMap, band: Band = Band()) -> tuple[float, PowerSpectrum]:
    marginal = st_marginal(tfmap)
    return band_peak(marginal.freqs, marginal.power, band), marginal
