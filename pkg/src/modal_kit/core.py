"""Shared domain types and preprocessing for the modal analysis methods.

Every estimator in the package consumes a :class:`TimeSeries` and reports
damped sinusoids as :class:`Mode` objects. A mode stores the *real cosine*
amplitude, so a signal is rebuilt as::

    x[n] = sum_k A_k * exp(alpha_k * n * dt) * cos(2*pi*f_k * n * dt + theta_k)

with the first sample at local time zero. Conjugate pole pairs are always
collapsed into one mode with ``f >= 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadDt,
    BandAboveNyquist,
    EmptyBand,
    NoModeInBand,
    NonFinite,
    OutOfRange,
    TooShort,
)

MIN_SAMPLES = 4

# f_dom values are reported on a 1 nHz grid. Floating point FFT/SVD pipelines
# are only scale invariant up to rounding noise (~1e-15 Hz); the grid absorbs it.
REPORT_DECIMALS = 9

# relative energy tolerance under which two modes count as tied
ENERGY_TIE_RTOL = 1e-12

# (label, f_lo, f_hi) in Hz; ranges overlap, a frequency may carry several labels
MODE_CLASSES = (
    ("global", 0.05, 0.2),
    ("inter-area", 0.25, 1.0),
    ("local", 1.0, 2.0),
    ("intra-plant", 1.5, 2.5),
    ("torsional", 10.0, 46.0),
)


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Uniformly sampled real record.

    ``samples`` is stored as a read-only float64 array. Build instances with
    :func:`validate_series` when the input is untrusted.
    """

    samples: np.ndarray
    dt: float
    t0: float = 0.0
    label: str = ""

    def __post_init__(self):
        arr = np.array(self.samples, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "t0", float(self.t0))

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def duration(self) -> float:
        return self.n * self.dt

    @property
    def fs(self) -> float:
        return 1.0 / self.dt

    @property
    def nyquist(self) -> float:
        return 0.5 / self.dt

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(self.n) * self.dt

    def with_samples(self, samples) -> "TimeSeries":
        return replace(self, samples=samples)

    def __len__(self):
        return self.n

    def __repr__(self):
        return (f"TimeSeries(label={self.label!r}, n={self.n}, dt={self.dt}, "
                f"t0={self.t0})")


@dataclass(frozen=True)
class Mode:
    """One damped sinusoid.

    Attributes
    ----------
    f : float
        Frequency in Hz, ``f >= 0``.
    alpha : float
        Damping factor in 1/s; negative values decay.
    amplitude : float
        Real cosine amplitude (twice the complex residue magnitude).
    phase : float
        Initial phase in rad, normalized into ``(-pi, pi]``.
    energy : float
        Envelope energy over the analysed record, see :func:`mode_energy`.
    """

    f: float
    alpha: float = 0.0
    amplitude: float = 1.0
    phase: float = 0.0
    energy: float = 0.0

    def __post_init__(self):
        if self.f < 0:
            raise ValueError(f"mode frequency must be >= 0, got {self.f}")
        if self.amplitude < 0:
            raise ValueError(f"mode amplitude must be >= 0, got {self.amplitude}")
        object.__setattr__(self, "phase", wrap_phase(self.phase))

    @property
    def unstable(self) -> bool:
        return self.alpha > 0

    @property
    def damping_ratio(self) -> float:
        """Damping ratio ``-alpha / |s|`` of the continuous-time pole."""
        w = 2 * math.pi * self.f
        mag = math.hypot(self.alpha, w)
        return -self.alpha / mag if mag > 0 else 0.0


@dataclass(frozen=True)
class Band:
    f_lo: float = 0.05
    f_hi: float = 5.0

    def __post_init__(self):
        if not (self.f_lo >= 0 and self.f_hi > self.f_lo):
            raise ValueError(f"invalid band [{self.f_lo}, {self.f_hi}]")

    def contains(self, f) -> np.ndarray | bool:
        return (f >= self.f_lo) & (f <= self.f_hi)

    @classmethod
    def parse(cls, text: str) -> "Band":
        """Parse ``"lo:hi"``."""
        lo, hi = text.split(":")
        return cls(float(lo), float(hi))

    def __str__(self):
        return f"{self.f_lo!r}:{self.f_hi!r}"


@dataclass(frozen=True, eq=False)
class PowerSpectrum:
    """Non-negative power (or energy) on a strictly ascending frequency axis."""

    freqs: np.ndarray
    power: np.ndarray

    def __post_init__(self):
        freqs = np.array(self.freqs, dtype=float)
        power = np.array(self.power, dtype=float)
        if freqs.shape != power.shape or freqs.ndim != 1:
            raise ValueError("freqs and power must be 1-D arrays of equal length")
        if freqs.size > 1 and not np.all(np.diff(freqs) > 0):
            raise ValueError("freqs must be strictly ascending")
        if not np.all(np.isfinite(power)) or np.any(power < 0):
            raise ValueError("power must be finite and non-negative")
        freqs.setflags(write=False)
        power.setflags(write=False)
        object.__setattr__(self, "freqs", freqs)
        object.__setattr__(self, "power", power)

    def __len__(self):
        return self.freqs.size

    def restrict(self, band: Band) -> "PowerSpectrum":
        keep = band.contains(self.freqs)
        return PowerSpectrum(self.freqs[keep], self.power[keep])


@dataclass(frozen=True, eq=False)
class TimeFrequencyMap:
    """Complex (or magnitude) values over frequency rows and time columns.

    ``mask``, when present, flags the cells free of edge effects (the wavelet
    cone of influence); ``None`` means every cell is usable.
    """

    times: np.ndarray
    freqs: np.ndarray
    values: np.ndarray
    mask: np.ndarray | None = None

    def __post_init__(self):
        if self.values.shape != (self.freqs.size, self.times.size):
            raise ValueError(
                f"values shape {self.values.shape} does not match "
                f"({self.freqs.size}, {self.times.size})")
        if self.mask is not None and self.mask.shape != self.values.shape:
            raise ValueError("mask shape must match values")

    @property
    def power(self) -> np.ndarray:
        return np.abs(self.values) ** 2


def classify_frequency(f: float) -> tuple[str, ...]:
    """Electromechanical mode classes whose range contains ``f``."""
    return tuple(name for name, lo, hi in MODE_CLASSES if lo <= f <= hi)


def wrap_phase(phase: float) -> float:
    p = math.remainder(float(phase), 2 * math.pi)
    if p <= -math.pi:
        p += 2 * math.pi
    return p


def validate_series(samples, dt, t0=0.0, label="", band: Band | None = None) -> TimeSeries:
    """Check raw samples and wrap them in a :class:`TimeSeries`.

    Raises
    ------
    TooShort, NonFinite, BadDt
        On fewer than 4 samples, NaN/Inf values, or a non-positive step.
    BandAboveNyquist
        If ``band`` is given and extends past the Nyquist frequency.
    """
    arr = np.asarray(samples, dtype=float).ravel()
    if arr.size < MIN_SAMPLES:
        raise TooShort(f"need at least {MIN_SAMPLES} samples, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise NonFinite(f"non-finite sample at index {bad}")
    dt = float(dt)
    if not (math.isfinite(dt) and dt > 0):
        raise BadDt(f"dt must be > 0, got {dt}")
    # equality allowed (the default 5 Hz edge is exactly Nyquist at 10 Hz), with
    # slack for dt values recovered from rounded CSV timestamps
    if band is not None and band.f_hi > 0.5 / dt * (1 + 1e-9):
        raise BandAboveNyquist(
            f"band upper edge {band.f_hi} Hz above Nyquist {0.5 / dt} Hz")
    return TimeSeries(arr, dt, t0, label)


def detrend(series: TimeSeries, policy: str = "linear", f0: float | None = None) -> TimeSeries:
    """Remove a mean, a least-squares line, or a fixed offset.

    ``policy`` is one of ``"mean"``, ``"linear"`` or ``"offset"`` (the
    latter subtracts ``f0``, e.g. the nominal 60 Hz of a grid record).
    """
    x = series.samples
    if policy == "mean":
        y = x - x.mean()
    elif policy == "linear":
        idx = np.arange(series.n, dtype=float)
        idx -= idx.mean()
        design = np.column_stack([np.ones_like(idx), idx])
        coef, *_ = np.linalg.lstsq(design, x, rcond=None)
        y = x - design @ coef
    elif policy == "offset":
        if f0 is None:
            raise ValueError("offset policy needs f0")
        y = x - float(f0)
    else:
        raise ValueError(f"unknown detrend policy {policy!r}")
    return series.with_samples(y)


def slice_window(series: TimeSeries, start_s: float, len_s: float) -> TimeSeries:
    """Contiguous sub-series starting ``start_s`` seconds after ``series.t0``.

    Start and length are snapped to the nearest sample.
    """
    i0 = int(round(start_s / series.dt))
    n = int(round(len_s / series.dt))
    if i0 < 0 or n < MIN_SAMPLES or i0 + n > series.n:
        raise OutOfRange(
            f"window [{start_s}, {start_s + len_s}] s not inside "
            f"[0, {series.duration}] s or shorter than {MIN_SAMPLES} samples")
    if i0 == 0 and n == series.n:
        return series
    return TimeSeries(series.samples[i0:i0 + n], series.dt,
                      series.t0 + i0 * series.dt, series.label)


def reconstruct(modes: Iterable[Mode], n_samples: int, dt: float,
                t0: float = 0.0, label: str = "") -> TimeSeries:
    """Evaluate the damped-sinusoid model for ``modes`` on ``n_samples`` points."""
    if n_samples < 1 or dt <= 0:
        raise ValueError("need n_samples >= 1 and dt > 0")
    t = np.arange(n_samples) * dt
    x = np.zeros(n_samples)
    for m in modes:
        x += m.amplitude * np.exp(m.alpha * t) * np.cos(2 * np.pi * m.f * t + m.phase)
    return TimeSeries(x, dt, t0, label)


def mode_energy(mode: Mode, duration: float) -> float:
    """Energy of the squared modal envelope over ``[0, duration]``.

    ``A**2 * (exp(2*alpha*T) - 1) / (2*alpha)``, which tends to ``A**2 * T``
    for an undamped mode.
    """
    if duration <= 0:
        raise ValueError("duration must be > 0")
    if mode.amplitude == 0:
        return 0.0
    a2 = mode.amplitude ** 2
    x = 2.0 * mode.alpha
    if x == 0.0:
        return a2 * duration
    if x * duration > 700:
        # exp overflows on its own; combine in the log domain
        return math.exp(2 * math.log(mode.amplitude) + x * duration - math.log(x))
    return a2 * math.expm1(x * duration) / x


def modes_from_poles(z: np.ndarray, residues: np.ndarray, dt: float,
                     duration: float | None = None) -> list[Mode]:
    """Collapse discrete poles and complex residues into real modes.

    Poles in the upper half plane become one mode with amplitude ``2|b|``;
    positive real poles give ``f = 0`` modes with amplitude ``|b|``. Poles in
    the lower half plane (conjugate partners), on the negative real axis
    (Nyquist) or at the origin are dropped. The list is sorted by frequency.
    """
    nyq = 0.5 / dt
    modes = []
    for zk, bk in zip(np.asarray(z), np.asarray(residues)):
        if zk == 0:
            continue
        ang = float(np.angle(zk))
        if ang < 0:
            continue
        f = ang / (2 * np.pi * dt)
        if f >= nyq:
            continue
        amp = abs(bk) if ang == 0 else 2 * abs(bk)
        m = Mode(f=f, alpha=math.log(abs(zk)) / dt, amplitude=float(amp),
                 phase=float(np.angle(bk)))
        if duration is not None:
            m = replace(m, energy=mode_energy(m, duration))
        modes.append(m)
    modes.sort(key=lambda m: (m.f, m.alpha))
    return modes


def fit_residues(x: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Least-squares complex residues ``b`` with ``x[n] ~ sum_k b_k z_k**n``.

    Columns of growing poles (``|z| > 1``) are normalized by their last value
    so the Vandermonde matrix never overflows.
    """
    z = np.asarray(z, dtype=complex)
    last = x.shape[0] - 1
    n = np.arange(x.shape[0])[:, None]
    grow = np.abs(z) > 1
    vander = np.empty((x.shape[0], z.size), dtype=complex)
    vander[:, ~grow] = z[None, ~grow] ** n
    vander[:, grow] = (1.0 / z[None, grow]) ** (last - n)
    c, *_ = np.linalg.lstsq(vander, x.astype(complex), rcond=None)
    b = c.copy()
    b[grow] = c[grow] * (1.0 / z[grow]) ** last
    return b


def select_dominant(modes: Sequence[Mode], band: Band) -> Mode:
    """Highest-energy mode inside ``band``; near-ties go to the lower frequency."""
    inside = [m for m in modes if band.contains(m.f)]
    if not inside:
        raise NoModeInBand(f"no mode inside [{band.f_lo}, {band.f_hi}] Hz")
    top = max(m.energy for m in inside)
    tied = [m for m in inside if m.energy >= top * (1 - ENERGY_TIE_RTOL)]
    return min(tied, key=lambda m: m.f)


def quantize_frequency(f: float) -> float:
    return round(float(f), REPORT_DECIMALS)


def parabolic_offset(y0: float, y1: float, y2: float) -> float:
    """Vertex offset, in grid steps, of the parabola through three samples."""
    denom = y0 - 2.0 * y1 + y2
    if not denom < 0:
        return 0.0
    return float(np.clip(0.5 * (y0 - y2) / denom, -0.5, 0.5))


def band_peak(freqs: np.ndarray, power: np.ndarray, band: Band,
              log_power: bool = True, log_freq: bool = False) -> float:
    """Refined frequency of the largest in-band value of ``power``.

    The maximum is picked among bins inside ``band``; neighbours used by the
    three-point parabolic refinement may lie outside it. With ``log_freq`` the
    parabola is fitted against ``log(freqs)`` (for geometric grids). Returns
    the frequency clipped to the band and quantized to the report grid.
    """
    freqs = np.asarray(freqs, dtype=float)
    power = np.asarray(power, dtype=float)
    idx = np.flatnonzero(band.contains(freqs))
    if idx.size == 0:
        raise EmptyBand(f"no bins inside [{band.f_lo}, {band.f_hi}] Hz")
    k = int(idx[np.argmax(power[idx])])
    f = freqs[k]
    if 0 < k < freqs.size - 1:
        y = power[k - 1:k + 2]
        if log_power and np.all(y > 0):
            y = np.log(y)
        delta = parabolic_offset(*y)
        if log_freq:
            step = 0.5 * (math.log(freqs[k + 1]) - math.log(freqs[k - 1]))
            f = math.exp(math.log(f) + delta * step)
        else:
            f = f + delta * 0.5 * (freqs[k + 1] - freqs[k - 1])
    f = min(max(f, band.f_lo), band.f_hi)
    return quantize_frequency(f)


def interior(n: int, edge_fraction: float) -> slice:
    """Slice dropping ``edge_fraction`` of the samples at *each* end."""
    cut = int(math.floor(edge_fraction * n))
    if 2 * cut >= n:
        cut = max((n - 1) // 2, 0)
    return slice(cut, n - cut)


__all__ = [
    "Band", "MODE_CLASSES", "Mode", "PowerSpectrum", "TimeFrequencyMap", "TimeSeries",
    "band_peak", "classify_frequency", "detrend", "fit_residues", "interior",
    "mode_energy", "modes_from_poles", "quantize_frequency", "reconstruct",
    "select_dominant", "slice_window", "validate_series", "wrap_phase",
]
