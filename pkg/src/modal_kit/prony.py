"""Least-squares Prony analysis.

The record is fitted by forward linear prediction of order ``p``; the roots of
the prediction polynomial are the discrete poles, and complex residues come
from a Vandermonde least-squares solve.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import (
    Band,
    Mode,
    PowerSpectrum,
    TimeSeries,
    fit_residues,
    mode_energy,
    modes_from_poles,
    quantize_frequency,
    select_dominant,
)
from .errors import IllConditioned, OrderTooHigh

AMPLITUDE_FLOOR = 1e-10


@dataclass(frozen=True)
class PronyConfig:
    """
    Parameters
    ----------
    order_p : int or None
        Model order for the ``"fixed"`` policy (even, >= 2). Under
        ``"svd_auto"`` it is the probe order used to estimate the rank and
        defaults to ``min(N // 3, max_order)``.
    order_policy : {"svd_auto", "fixed"}
    threshold : float
        Singular values below ``threshold * s_max`` are treated as zero by
        ``"svd_auto"``.
    """

    order_p: int | None = None
    order_policy: str = "svd_auto"
    threshold: float = 1e-8
    max_order: int = 60

    def __post_init__(self):
        if self.order_policy not in ("svd_auto", "fixed"):
            raise ValueError(f"unknown order_policy {self.order_policy!r}")
        if self.order_policy == "fixed":
            if self.order_p is None or self.order_p < 2 or self.order_p % 2:
                raise ValueError("fixed order_p must be an even integer >= 2")
        if not self.threshold > 0:
            raise ValueError("threshold must be > 0")


def prediction_matrix(x: np.ndarray, p: int) -> np.ndarray:
    """Rows ``[x[n-1], x[n-2], ..., x[n-p]]`` for ``n = p .. N-1``."""
    n = x.shape[0]
    return np.column_stack([x[p - 1 - k:n - 1 - k] for k in range(p)])


def effective_order(x: np.ndarray, probe: int, threshold: float) -> int:
    """Numerical rank of the order-``probe`` prediction data matrix."""
    data = np.column_stack([x[probe:], prediction_matrix(x, probe)])
    s = np.linalg.svd(data, compute_uv=False)
    if s[0] == 0:
        return 0
    return min(int(np.sum(s > threshold * s[0])), probe)


def prony_poles(x: np.ndarray, p: int, check_rank: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Discrete poles and complex residues of an order-``p`` Prony fit."""
    a_mat = prediction_matrix(x, p)
    if check_rank and np.linalg.matrix_rank(a_mat) < p:
        raise IllConditioned(f"prediction matrix is rank deficient at order {p}")
    coef, *_ = np.linalg.lstsq(a_mat, -x[p:], rcond=None)
    z = np.roots(np.concatenate([[1.0], coef]))
    return z, fit_residues(x, z)


def prony_fit(series: TimeSeries, cfg: PronyConfig = PronyConfig()) -> list[Mode]:
    """Fit damped sinusoids to ``series``; modes sorted by frequency."""
    x = series.samples
    n = series.n
    scale = float(np.max(np.abs(x)))
    if scale == 0:
        return []
    if cfg.order_policy == "fixed":
        p = cfg.order_p
        if 2 * p >= n:
            raise OrderTooHigh(f"order {p} needs more than {2 * p} samples, got {n}")
    else:
        probe = cfg.order_p or min(n // 3, cfg.max_order)
        if probe < 1 or 2 * probe >= n:
            raise OrderTooHigh(f"probe order {probe} too high for {n} samples")
        p = effective_order(x, probe, cfg.threshold)
        if p == 0:
            return []
    z, b = prony_poles(x, p, check_rank=cfg.order_policy == "fixed")
    modes = modes_from_poles(z, b, series.dt, series.duration)
    return [m for m in modes if m.amplitude >= AMPLITUDE_FLOOR * scale]


def prony_energy_spectrum(modes, duration: float) -> PowerSpectrum:
    """Discrete energy spectrum, one point per mode frequency.

    Modes sharing a frequency exactly have their energies summed.
    """
    energies: dict[float, float] = {}
    for m in modes:
        energies[m.f] = energies.get(m.f, 0.0) + mode_energy(m, duration)
    freqs = sorted(energies)
    return PowerSpectrum(freqs, [energies[f] for f in freqs])


def dominant_mode_prony(series: TimeSeries, cfg: PronyConfig = PronyConfig(),
                        band: Band = Band()) -> tuple[Mode, PowerSpectrum]:
    """Highest-energy in-band Prony mode and the Prony energy spectrum."""
    modes = prony_fit(series, cfg)
    spectrum = prony_energy_spectrum(modes, series.duration)
    dom = select_dominant(modes, band)
    return replace(dom, f=quantize_frequency(dom.f)), spectrum
