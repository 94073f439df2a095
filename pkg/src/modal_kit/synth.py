"""Synthetic multi-mode ringdowns used as ground truth for every estimator."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import MIN_SAMPLES, Mode, TimeSeries, reconstruct
from .errors import AliasedMode, TooShort


@dataclass(frozen=True)
class SynthSpec:
    modes: tuple[Mode, ...] = field(default_factory=tuple)
    dt: float = 0.1
    duration: float = 60.0
    noise_std: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        if self.dt <= 0:
            raise ValueError("dt must be > 0")
        if self.noise_std < 0:
            raise ValueError("noise_std must be >= 0")

    @property
    def n_samples(self) -> int:
        return int(round(self.duration / self.dt))

    @classmethod
    def from_dict(cls, data: dict) -> "SynthSpec":
        """Build from a plain mapping (parsed JSON or TOML)."""
        modes = tuple(
            Mode(f=float(m["f"]), alpha=float(m.get("alpha", 0.0)),
                 amplitude=float(m.get("amplitude", 1.0)),
                 phase=float(m.get("phase", 0.0)))
            for m in data.get("modes", ())
        )
        return cls(modes=modes, dt=float(data.get("dt", 0.1)),
                   duration=float(data.get("duration", 60.0)),
                   noise_std=float(data.get("noise_std", 0.0)),
                   seed=int(data.get("seed", 0)))


def default_scenario(noise_std: float = 0.005, seed: int = 1) -> SynthSpec:
    """Dominant 0.2 Hz mode plus a weaker, faster-decaying 0.8 Hz inter-area mode."""
    return SynthSpec(
        modes=(Mode(0.2, -0.02, 1.0, 0.0), Mode(0.8, -0.05, 0.4, math.pi / 4)),
        dt=0.1, duration=60.0, noise_std=noise_std, seed=seed,
    )


def generate_ringdown(spec: SynthSpec, label: str = "synth") -> TimeSeries:
    """Evaluate ``spec.modes`` forward and add seeded white Gaussian noise.

    Raises ``AliasedMode`` if a mode sits at or above Nyquist. Modes closer
    than ``1/duration`` in frequency only trigger a warning.
    """
    n = spec.n_samples
    if n < MIN_SAMPLES:
        raise TooShort(f"duration/dt gives {n} samples, need {MIN_SAMPLES}")
    nyq = 0.5 / spec.dt
    for m in spec.modes:
        if m.f >= nyq:
            raise AliasedMode(f"mode at {m.f} Hz is not below Nyquist {nyq} Hz")
    freqs = sorted(m.f for m in spec.modes)
    for a, b in zip(freqs, freqs[1:]):
        if b - a <= 1.0 / spec.duration:
            warnings.warn(f"modes at {a} and {b} Hz are closer than the "
                          f"record resolution {1.0 / spec.duration:.4g} Hz")
    clean = reconstruct(spec.modes, n, spec.dt, label=label)
    if spec.noise_std == 0:
        return clean
    rng = np.random.default_rng(spec.seed)
    return clean.with_samples(clean.samples + rng.normal(0.0, spec.noise_std, n))
