"""Matrix Pencil mode estimation with SVD rank truncation.

The record is arranged in a Hankel matrix with ``L + 1`` columns. Its
dominant right singular vectors span the signal subspace; the poles are the
eigenvalues of the shift operator between the first and last ``L`` rows of
that basis (a total-least-squares flavoured pencil).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg as la

from .core import (
    Band,
    Mode,
    TimeSeries,
    detrend,
    fit_residues,
    mode_energy,
    modes_from_poles,
    quantize_frequency,
    reconstruct,
    select_dominant,
    slice_window,
)
from .errors import BadPencilParameter, RankZero, WindowTooLong

AMPLITUDE_FLOOR = 1e-10

__all__ = [
    "DominantModeReport", "PencilConfig", "dominant_mode_mpm", "mode_energy", "pencil_fit",
    "pencil_poles", "reconstruct_mpm", "sliding_dominant",
]


@dataclass(frozen=True)
class PencilConfig:
    """
    Parameters
    ----------
    pencil_L : int or None
        Pencil parameter; ``N // 3`` when ``None``.
    rank_policy : {"svd_auto", "fixed"}
    rank : int or None
        Model order ``M`` for the ``"fixed"`` policy.
    threshold : float
        Relative singular value cut for ``"svd_auto"``.
    window_len_s, step_s : float or None
        Sliding-window length and stride; ``None`` means the whole record.
    """

    pencil_L: int | None = None
    rank_policy: str = "svd_auto"
    rank: int | None = None
    threshold: float = 1e-8
    window_len_s: float | None = None
    step_s: float | None = None

    def __post_init__(self):
        if self.rank_policy not in ("svd_auto", "fixed"):
            raise ValueError(f"unknown rank_policy {self.rank_policy!r}")
        if self.rank_policy == "fixed" and (self.rank is None or self.rank < 1):
            raise ValueError("fixed rank_policy needs rank >= 1")
        if not self.threshold > 0:
            raise ValueError("threshold must be > 0")


@dataclass(frozen=True)
class DominantModeReport:
    window_start_s: float
    window_len_s: float
    dominant: Mode
    all_modes: tuple[Mode, ...] = field(default_factory=tuple)


def hankel_matrix(x: np.ndarray, pencil_L: int) -> np.ndarray:
    """``(N - L) x (L + 1)`` Hankel matrix with ``Y[i, j] = x[i + j]``."""
    n = x.shape[0]
    return la.hankel(x[:n - pencil_L], x[n - pencil_L - 1:])


def pencil_poles(x: np.ndarray, cfg: PencilConfig = PencilConfig()) -> np.ndarray:
    """Discrete poles of ``x`` from the rank-truncated pencil."""
    n = x.shape[0]
    pencil_L = cfg.pencil_L if cfg.pencil_L is not None else n // 3
    if not 1 <= pencil_L <= n - 2:
        raise BadPencilParameter(f"pencil_L={pencil_L} outside [1, {n - 2}]")
    _, s, vh = np.linalg.svd(hankel_matrix(x, pencil_L), full_matrices=False)
    if s[0] == 0:
        raise RankZero("Hankel matrix is identically zero")
    if cfg.rank_policy == "fixed":
        rank = cfg.rank
    else:
        # a full-rank (noisy) Hankel matrix is clipped to the largest usable order
        rank = min(int(np.sum(s > cfg.threshold * s[0])), pencil_L, n - pencil_L)
    if not rank <= pencil_L <= n - rank:
        raise BadPencilParameter(
            f"pencil_L={pencil_L} must lie in [{rank}, {n - rank}] for rank {rank}")
    v = vh[:rank].conj().T
    shift, *_ = np.linalg.lstsq(v[:-1], v[1:], rcond=None)
    return np.linalg.eigvals(shift)


def pencil_fit(series: TimeSeries, cfg: PencilConfig = PencilConfig()) -> list[Mode]:
    """Modes of ``series`` sorted by frequency, energies over the record length."""
    x = series.samples
    scale = float(np.max(np.abs(x)))
    if scale == 0:
        raise RankZero("signal is identically zero")
    z = pencil_poles(x, cfg)
    modes = modes_from_poles(z, fit_residues(x, z), series.dt, series.duration)
    modes = [m for m in modes if m.amplitude >= AMPLITUDE_FLOOR * scale]
    if not modes:
        raise RankZero("no mode above the amplitude floor")
    return modes


def dominant_mode_mpm(series: TimeSeries, cfg: PencilConfig = PencilConfig(),
                      band: Band = Band()) -> tuple[Mode, list[Mode]]:
    """Highest-energy in-band mode over the whole record, plus all modes."""
    modes = pencil_fit(series, cfg)
    dom = select_dominant(modes, band)
    return replace(dom, f=quantize_frequency(dom.f)), modes


def sliding_dominant(series: TimeSeries, cfg: PencilConfig = PencilConfig(),
                     band: Band = Band(), detrend_policy: str | None = None,
                     workers: int | None = None) -> list[DominantModeReport]:
    """Dominant mode per window as the window slides along the record.

    Windows are solved independently (optionally on a thread pool) and
    returned in start-time order. ``detrend_policy`` is applied to each window
    before fitting when given.
    """
    len_s = cfg.window_len_s if cfg.window_len_s is not None else series.duration
    step_s = cfg.step_s if cfg.step_s is not None else len_s
    win_n = int(round(len_s / series.dt))
    step_n = int(round(step_s / series.dt))
    if win_n > series.n:
        raise WindowTooLong(f"window {len_s} s longer than record {series.duration} s")
    if step_n < 1:
        raise ValueError("step must be at least one sample")
    starts = range(0, series.n - win_n + 1, step_n)

    def solve(i0):
        win = slice_window(series, i0 * series.dt, win_n * series.dt)
        if detrend_policy is not None:
            win = detrend(win, detrend_policy)
        modes = pencil_fit(win, cfg)
        return DominantModeReport(i0 * series.dt, win_n * series.dt,
                                  select_dominant(modes, band), tuple(modes))

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(solve, starts))
    return [solve(i0) for i0 in starts]


def reconstruct_mpm(series: TimeSeries, cfg: PencilConfig = PencilConfig()) -> tuple[TimeSeries, float]:
    """Model fit of ``series`` and its relative RMS error."""
    modes = pencil_fit(series, cfg)
    fit = reconstruct(modes, series.n, series.dt, series.t0, series.label)
    x = series.samples
    err = np.sqrt(np.mean((x - fit.samples) ** 2)) / np.sqrt(np.mean(x ** 2))
    return fit, float(err)
