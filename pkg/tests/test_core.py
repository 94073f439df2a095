import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modal_kit.core import (
    Band,
    Mode,
    PowerSpectrum,
    TimeSeries,
    band_peak,
    classify_frequency,
    detrend,
    interior,
    mode_energy,
    modes_from_poles,
    reconstruct,
    select_dominant,
    slice_window,
    validate_series,
    wrap_phase,
)
from modal_kit.errors import (
    BadDt,
    BandAboveNyquist,
    EmptyBand,
    NoModeInBand,
    NonFinite,
    OutOfRange,
    TooShort,
)

from oracles import pointwise_modes


def test_validate_series_ok():
    s = validate_series(np.zeros(600), 0.1, label="a")
    assert s.n == 600
    assert s.duration == pytest.approx(60.0)
    assert s.label == "a"


def test_validate_series_too_short():
    with pytest.raises(TooShort):
        validate_series([1.0, 2.0, 3.0], 0.1)


def test_validate_series_nan():
    x = np.ones(10)
    x[4] = np.nan
    with pytest.raises(NonFinite):
        validate_series(x, 0.1)


@pytest.mark.parametrize("dt", [0.0, -0.1, float("nan")])
def test_validate_series_bad_dt(dt):
    with pytest.raises(BadDt):
        validate_series(np.ones(10), dt)


def test_validate_series_band_above_nyquist():
    with pytest.raises(BandAboveNyquist):
        validate_series(np.ones(10), 0.2, band=Band(0.05, 5.0))
    # edge exactly at Nyquist is accepted
    validate_series(np.ones(10), 0.1, band=Band(0.05, 5.0))


def test_samples_are_read_only():
    s = TimeSeries(np.arange(5.0), 1.0)
    with pytest.raises(ValueError):
        s.samples[0] = 3.0


def test_detrend_mean_constant():
    s = TimeSeries(np.full(100, 60.0), 0.1)
    assert np.all(detrend(s, "mean").samples == 0)


def test_detrend_linear_ramp():
    s = TimeSeries(np.arange(10.0), 0.1)
    assert np.max(np.abs(detrend(s, "linear").samples)) < 1e-12


def test_detrend_offset():
    t = np.arange(600) * 0.1
    s = TimeSeries(60 + 0.01 * np.cos(2 * np.pi * 0.2 * t), 0.1)
    out = detrend(s, "offset", f0=60.0)
    expected = [0.01 * math.cos(2 * math.pi * 0.2 * i * 0.1) for i in range(600)]
    np.testing.assert_allclose(out.samples, expected, rtol=0, atol=1e-13)
    assert out.n == s.n and out.dt == s.dt


def test_detrend_unknown_policy():
    with pytest.raises(ValueError):
        detrend(TimeSeries(np.ones(5), 1.0), "quadratic")


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=4, max_size=200))
def test_detrend_mean_is_zero_mean(values):
    x = np.array(values)
    out = detrend(TimeSeries(x, 1.0), "mean").samples
    assert abs(out.mean()) <= 1e-12 * max(np.max(np.abs(x)), 1e-300)


def test_slice_window_basic():
    s = TimeSeries(np.arange(600.0), 0.1, t0=3.0)
    w = slice_window(s, 10, 20)
    assert w.n == 200
    assert w.t0 == pytest.approx(13.0)
    assert w.dt == s.dt
    assert w.samples[0] == 100.0


def test_slice_window_identity():
    s = TimeSeries(np.arange(600.0), 0.1)
    w = slice_window(s, 0, 60)
    assert np.array_equal(w.samples, s.samples) and w.t0 == s.t0


def test_slice_window_out_of_range():
    s = TimeSeries(np.arange(600.0), 0.1)
    with pytest.raises(OutOfRange):
        slice_window(s, 55, 20)
    with pytest.raises(OutOfRange):
        slice_window(s, -1, 5)


@settings(max_examples=100, deadline=None)
@given(a=st.integers(0, 300), la=st.integers(100, 300), b=st.integers(0, 50), lb=st.integers(4, 50))
def test_slice_composes(a, la, b, lb):
    s = TimeSeries(np.random.default_rng(0).normal(size=600), 0.1)
    first = slice_window(s, a * 0.1, la * 0.1)
    twice = slice_window(first, b * 0.1, lb * 0.1)
    once = slice_window(s, (a + b) * 0.1, lb * 0.1)
    assert np.array_equal(twice.samples, once.samples)
    assert twice.dt == once.dt
    assert twice.t0 == pytest.approx(once.t0, rel=0, abs=1e-12)


def test_reconstruct_single_cosine():
    s = reconstruct([Mode(0.2, 0.0, 1.0, 0.0)], 600, 0.1)
    t = np.arange(600) * 0.1
    assert np.max(np.abs(s.samples - np.cos(2 * np.pi * 0.2 * t))) <= 1e-15


def test_reconstruct_empty():
    assert np.all(reconstruct([], 50, 0.1).samples == 0)


def test_reconstruct_two_modes_against_pointwise():
    modes = [Mode(0.2, -0.1, 1.0, 0.0), Mode(0.8, -0.05, 0.5, math.pi / 4)]
    got = reconstruct(modes, 600, 0.1).samples
    ref = pointwise_modes([(0.2, -0.1, 1.0, 0.0), (0.8, -0.05, 0.5, math.pi / 4)], 600, 0.1)
    np.testing.assert_allclose(got, ref, rtol=0, atol=1e-12)


mode_st = st.builds(Mode, f=st.floats(0, 4.9), alpha=st.floats(-0.5, 0.05),
                    amplitude=st.floats(0, 3), phase=st.floats(-math.pi, math.pi))


@settings(max_examples=50, deadline=None)
@given(st.lists(mode_st, max_size=4), st.lists(mode_st, max_size=4))
def test_reconstruct_is_linear(a, b):
    both = reconstruct(a + b, 200, 0.1).samples
    split = reconstruct(a, 200, 0.1).samples + reconstruct(b, 200, 0.1).samples
    assert np.max(np.abs(both - split)) <= 1e-12 * max(1.0, np.max(np.abs(both)))


@pytest.mark.parametrize("raw, expected", [
    (0.0, 0.0), (math.pi, math.pi), (-math.pi, math.pi), (3 * math.pi, math.pi),
    (2 * math.pi + 0.5, 0.5), (-0.25, -0.25),
])
def test_wrap_phase(raw, expected):
    assert wrap_phase(raw) == pytest.approx(expected, abs=1e-12)


def test_mode_rejects_negative_values():
    with pytest.raises(ValueError):
        Mode(-0.1)
    with pytest.raises(ValueError):
        Mode(0.1, amplitude=-1)


def test_mode_energy_closed_forms():
    assert mode_energy(Mode(0.2, 0.0, 2.0), 10) == pytest.approx(40.0, rel=1e-15)
    # quadrature oracle value
    assert mode_energy(Mode(0.2, -0.1, 1.0), 60) == pytest.approx(4.999969278938233, rel=1e-12)
    assert mode_energy(Mode(0.2, -0.1, 0.0), 60) == 0.0


def test_mode_energy_large_growth_is_finite():
    e = mode_energy(Mode(0.2, 10.0, 1e-200), 60)
    assert math.isfinite(e) and e > 0


def test_modes_from_poles_collapses_pairs():
    dt = 0.1
    z = np.exp((-0.1 + 2j * np.pi * 0.3) * dt)
    b = 0.5 * np.exp(0.4j)
    modes = modes_from_poles(np.array([z, np.conj(z)]), np.array([b, np.conj(b)]), dt)
    assert len(modes) == 1
    m = modes[0]
    assert m.f == pytest.approx(0.3) and m.alpha == pytest.approx(-0.1)
    assert m.amplitude == pytest.approx(1.0) and m.phase == pytest.approx(0.4)


def test_modes_from_poles_drops_nyquist_pole():
    modes = modes_from_poles(np.array([-0.9, 0.9]), np.array([1.0, 2.0]), 0.1)
    assert [m.f for m in modes] == [0.0]
    assert modes[0].amplitude == pytest.approx(2.0)


def test_select_dominant_tie_goes_low():
    modes = [Mode(0.5, energy=10.0), Mode(0.3, energy=10.0 * (1 + 1e-14)), Mode(0.7, energy=1.0)]
    assert select_dominant(modes, Band()).f == 0.3


def test_select_dominant_empty_band():
    with pytest.raises(NoModeInBand):
        select_dominant([Mode(0.2, energy=1.0)], Band(1.0, 5.0))


def test_band_peak_refines_parabola():
    # log power is an exact parabola with vertex at 0.213
    f = np.arange(0, 1, 0.01)
    p = np.exp(-((f - 0.213) ** 2) / 0.001)
    assert band_peak(f, p, Band(0.05, 0.9)) == pytest.approx(0.213, abs=1e-9)


def test_band_peak_empty():
    with pytest.raises(EmptyBand):
        band_peak(np.array([0.0, 0.01]), np.array([1.0, 1.0]), Band(1, 2))


def test_power_spectrum_checks():
    with pytest.raises(ValueError):
        PowerSpectrum([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        PowerSpectrum([0.0, 1.0], [1.0, -1.0])


def test_classify_frequency():
    assert classify_frequency(0.5) == ("inter-area",)
    assert classify_frequency(0.1) == ("global",)
    assert "intra-plant" in classify_frequency(1.7)


def test_interior():
    assert interior(100, 0.1) == slice(10, 90)
    assert interior(3, 0.6) == slice(1, 2)
