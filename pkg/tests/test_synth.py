import json
import math

import numpy as np
import pytest

from modal_kit.core import Mode, reconstruct
from modal_kit.errors import AliasedMode
from modal_kit.synth import SynthSpec, default_scenario, generate_ringdown

from oracles import pointwise_modes


def test_noiseless_equals_reconstruct():
    spec = SynthSpec(modes=[Mode(0.2, 0.0, 1.0, 0.0)], dt=0.1, duration=60)
    got = generate_ringdown(spec)
    ref = reconstruct(spec.modes, 600, 0.1)
    assert np.array_equal(got.samples, ref.samples)


def test_seeded_noise_is_reproducible():
    spec = SynthSpec(modes=[Mode(0.2)], noise_std=0.1, seed=42)
    assert np.array_equal(generate_ringdown(spec).samples, generate_ringdown(spec).samples)


def test_different_seeds_differ():
    a = generate_ringdown(SynthSpec(modes=[Mode(0.2)], noise_std=0.1, seed=1))
    b = generate_ringdown(SynthSpec(modes=[Mode(0.2)], noise_std=0.1, seed=2))
    assert not np.array_equal(a.samples, b.samples)


def test_two_mode_variance_matches_pointwise():
    spec = SynthSpec(modes=[Mode(0.2, -0.1, 1, 0), Mode(0.8, -0.05, 0.5, math.pi / 4)],
                     dt=0.1, duration=60)
    got = np.var(generate_ringdown(spec).samples, ddof=1)
    # sample variance of the loop evaluator, frozen
    assert got == pytest.approx(0.06179049744908762, abs=1e-12)
    ref = pointwise_modes([(0.2, -0.1, 1, 0), (0.8, -0.05, 0.5, math.pi / 4)], 600, 0.1)
    assert got == pytest.approx(np.var(ref, ddof=1), abs=1e-12)


def test_noise_std_statistics():
    spec = SynthSpec(modes=(), dt=0.01, duration=200, noise_std=0.3, seed=7)
    x = generate_ringdown(spec).samples
    assert x.size == 20000
    assert abs(np.std(x) / 0.3 - 1) < 0.05


def test_aliased_mode():
    with pytest.raises(AliasedMode):
        generate_ringdown(SynthSpec(modes=[Mode(5.0)], dt=0.1))


def test_close_modes_warn():
    with pytest.warns(UserWarning):
        generate_ringdown(SynthSpec(modes=[Mode(0.2), Mode(0.21)], duration=60))


def test_from_dict_round_trip():
    data = json.loads('{"modes": [{"f": 0.2, "alpha": -0.02, "amplitude": 1.0, "phase": 0.0}],'
                      ' "dt": 0.05, "duration": 30, "noise_std": 0.01, "seed": 3}')
    spec = SynthSpec.from_dict(data)
    assert spec.n_samples == 600
    assert spec.modes[0] == Mode(0.2, -0.02, 1.0, 0.0)


def test_default_scenario_shape():
    spec = default_scenario()
    assert [m.f for m in spec.modes] == [0.2, 0.8]
    assert spec.noise_std == 0.005 and spec.seed == 1
