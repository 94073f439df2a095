"""Empirical mode decomposition and the Hilbert marginal spectrum.

Sifting builds cubic-spline envelopes through the local maxima and minima
(each set mirrored about the record ends) and subtracts their mean until the
candidate passes both the SD stop test and the IMF extrema/zero-crossing rule.
Each IMF is then turned into an analytic signal; its instantaneous amplitude
is accumulated over time into instantaneous-frequency bins.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.signal import hilbert

from .core import Band, PowerSpectrum, TimeSeries, band_peak, interior
from .errors import EmptyBand, TooFewExtrema

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HhtConfig:
    """
    Parameters
    ----------
    sd_threshold : float
        Sifting stops once ``sum((h_prev - h)**2) / sum(h_prev**2)`` drops
        below this and the candidate is a valid IMF.
    max_sift : int
        Iteration cap per IMF; an IMF that hits it is flagged.
    max_imfs : int
    n_mirror : int
        Extrema mirrored beyond each end of the record.
    n_bins : int
        Marginal-spectrum bins spread uniformly over the band.
    edge_fraction : float
        Fraction of samples dropped at each end before accumulation.
    energy : bool
        Accumulate squared amplitude instead of amplitude.
    """

    sd_threshold: float = 0.2
    max_sift: int = 100
    max_imfs: int = 12
    n_mirror: int = 2
    n_bins: int = 512
    edge_fraction: float = 0.05
    energy: bool = False


@dataclass(frozen=True, eq=False)
class ImfSet:
    imfs: list[TimeSeries]
    residue: TimeSeries
    sift_counts: list[int] = field(default_factory=list)
    flagged: list[bool] = field(default_factory=list)


@dataclass(frozen=True, eq=False)
class AnalyticImf:
    amplitude: np.ndarray
    phase: np.ndarray
    inst_freq: np.ndarray
    hilbert: np.ndarray


@dataclass(frozen=True, eq=False)
class MarginalSpectrum(PowerSpectrum):
    """Hilbert marginal spectrum on bin centres.

    ``negative_freq_count`` counts interior samples dropped for a negative
    instantaneous frequency.
    """

    bin_width: float = 0.0
    negative_freq_count: int = 0


def find_extrema(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Indices of local maxima and minima; a flat run counts once, at its start."""
    s = np.sign(np.diff(x))
    nz = np.flatnonzero(s)
    if nz.size == 0:
        return np.array([], dtype=int), np.array([], dtype=int)
    # fill flat steps with the next non-zero slope
    fill = nz[np.searchsorted(nz, np.arange(s.size), side="left").clip(max=nz.size - 1)]
    s = s[fill]
    change = np.diff(s)
    maxima = np.flatnonzero(change < 0) + 1
    minima = np.flatnonzero(change > 0) + 1
    return maxima, minima


def count_zero_crossings(x: np.ndarray) -> int:
    s = np.sign(x)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def is_imf(x: np.ndarray) -> bool:
    maxima, minima = find_extrema(x)
    return abs(maxima.size + minima.size - count_zero_crossings(x)) <= 1


def _envelope(idx: np.ndarray, x: np.ndarray, n_mirror: int) -> np.ndarray:
    n = x.size
    left = -idx[:n_mirror][::-1]
    right = 2 * (n - 1) - idx[-n_mirror:][::-1]
    knots = np.concatenate([left, idx, right])
    vals = np.concatenate([x[idx[:n_mirror]][::-1], x[idx], x[idx[-n_mirror:]][::-1]])
    return CubicSpline(knots, vals)(np.arange(n))


def sift(x: np.ndarray, cfg: HhtConfig = HhtConfig()) -> tuple[np.ndarray, int, bool]:
    """Extract one IMF from ``x``; returns ``(imf, iterations, flagged)``."""
    h = x.copy()
    for it in range(1, cfg.max_sift + 1):
        maxima, minima = find_extrema(h)
        if maxima.size == 0 or minima.size == 0:
            return h, it - 1, not is_imf(h)
        mean = 0.5 * (_envelope(maxima, h, cfg.n_mirror) + _envelope(minima, h, cfg.n_mirror))
        prev, h = h, h - mean
        denom = np.sum(prev ** 2)
        sd = np.sum((prev - h) ** 2) / denom if denom > 0 else 0.0
        if sd < cfg.sd_threshold and is_imf(h):
            return h, it, False
    log.debug("sifting hit max_sift=%d", cfg.max_sift)
    return h, cfg.max_sift, not is_imf(h)


def emd(series: TimeSeries, cfg: HhtConfig = HhtConfig()) -> ImfSet:
    """Decompose ``series`` into IMFs plus a residue that sums back to it."""
    x = series.samples
    maxima, minima = find_extrema(x)
    if maxima.size < 2 or minima.size < 2:
        raise TooFewExtrema(
            f"need >= 2 maxima and minima, got {maxima.size} and {minima.size}")
    imfs, counts, flags = [], [], []
    r = x.copy()
    while len(imfs) < cfg.max_imfs:
        maxima, minima = find_extrema(r)
        if maxima.size + minima.size < 2 or maxima.size == 0 or minima.size == 0:
            break
        imf, its, flagged = sift(r, cfg)
        imfs.append(series.with_samples(imf))
        counts.append(its)
        flags.append(flagged)
        r = r - imf
    return ImfSet(imfs, series.with_samples(r), counts, flags)


def hilbert_analytic(imf: TimeSeries) -> AnalyticImf:
    """Instantaneous amplitude, unwrapped phase and frequency (Hz) of an IMF."""
    c = imf.samples
    z = hilbert(c)
    amp = np.abs(z)
    if not np.any(amp > 0):
        zeros = np.zeros_like(c)
        return AnalyticImf(zeros, zeros.copy(), zeros.copy(), z.imag)
    phase = np.unwrap(np.angle(z))
    inst_freq = np.gradient(phase, imf.dt) / (2 * np.pi)
    return AnalyticImf(amp, phase, inst_freq, z.imag)


def hilbert_marginal_spectrum(imf_set: ImfSet, band: Band = Band(),
                              cfg: HhtConfig = HhtConfig()) -> MarginalSpectrum:
    """Accumulate ``a(t) * dt`` into the bin of ``inst_freq(t)`` over interior times.

    Samples whose amplitude is below ``1e-6`` of the largest IMF amplitude are
    skipped, as are negative instantaneous frequencies (counted separately)
    and frequencies outside ``band``.
    """
    if cfg.n_bins < 1:
        raise EmptyBand("n_bins must be >= 1")
    width = (band.f_hi - band.f_lo) / cfg.n_bins
    centres = band.f_lo + (np.arange(cfg.n_bins) + 0.5) * width
    acc = np.zeros(cfg.n_bins)
    negatives = 0
    if imf_set.imfs:
        dt = imf_set.imfs[0].dt
        analytic = [hilbert_analytic(c) for c in imf_set.imfs]
        floor = 1e-6 * max(float(a.amplitude.max()) for a in analytic)
        cols = interior(imf_set.imfs[0].n, cfg.edge_fraction)
        for a in analytic:
            amp = a.amplitude[cols]
            freq = a.inst_freq[cols]
            live = (amp >= floor) & (amp > 0)
            negatives += int(np.count_nonzero(live & (freq < 0)))
            use = live & band.contains(freq)
            idx = np.minimum(((freq[use] - band.f_lo) / width).astype(int), cfg.n_bins - 1)
            weight = amp[use] ** 2 if cfg.energy else amp[use]
            acc += np.bincount(idx, weights=weight * dt, minlength=cfg.n_bins)
    return MarginalSpectrum(centres, acc, bin_width=width, negative_freq_count=negatives)


def dominant_mode_hms(series: TimeSeries, cfg: HhtConfig = HhtConfig(),
                      band: Band = Band()) -> tuple[float, MarginalSpectrum]:
    hms = hilbert_marginal_spectrum(emd(series, cfg), band, cfg)
    if not np.any(hms.power > 0):
        raise EmptyBand("no instantaneous frequency fell inside the band")
    return band_peak(hms.freqs, hms.power, band), hms
