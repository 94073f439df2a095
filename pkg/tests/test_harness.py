import json

import numpy as np
import pytest

from modal_kit.core import Band, Mode, TimeSeries, reconstruct
from modal_kit.errors import (
    BandAboveNyquist,
    EmptyFile,
    IoError,
    NoMethodsSelected,
    NonUniformSampling,
    ParseError,
)
from modal_kit.harness import (
    CSV_COLUMNS,
    METHODS,
    ChannelSet,
    config_digest,
    emit_report,
    load_csv,
    render_csv,
    render_json,
    run_comparison,
    write_channels_csv,
)
from modal_kit.prony import PronyConfig
from modal_kit.synth import default_scenario, generate_ringdown


def _write(tmp_path, text, name="in.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_csv_basic(tmp_path):
    p = _write(tmp_path, "# comment\n\ntime_s,a,b\n0.0,1,2\n0.1,3,4\n0.2,5,6\n0.3,7,8\n")
    cs = load_csv(p)
    assert cs.labels == ["a", "b"]
    assert cs.dt == pytest.approx(0.1)
    assert cs.channels["b"].samples.tolist() == [2, 4, 6, 8]


def test_load_csv_t0(tmp_path):
    p = _write(tmp_path, "time_s,a\n5.0,1\n5.5,2\n6.0,3\n6.5,4\n")
    s = load_csv(p).channels["a"]
    assert s.t0 == 5.0 and s.dt == 0.5


def test_parse_error_line_number(tmp_path):
    p = _write(tmp_path, "time_s,a\n0.0,1\n0.1,x\n")
    with pytest.raises(ParseError) as exc:
        load_csv(p)
    assert exc.value.line == 3


def test_field_count_error(tmp_path):
    p = _write(tmp_path, "# c\ntime_s,a,b\n0.0,1,2\n0.1,1\n")
    with pytest.raises(ParseError) as exc:
        load_csv(p)
    assert exc.value.line == 4


def test_non_uniform(tmp_path):
    p = _write(tmp_path, "time_s,a\n0.0,1\n0.1,2\n0.2,3\n0.35,4\n0.45,5\n0.55,6\n")
    with pytest.raises(NonUniformSampling) as exc:
        load_csv(p)
    assert exc.value.line == 5


def test_header_only_and_empty(tmp_path):
    with pytest.raises(EmptyFile):
        load_csv(_write(tmp_path, "time_s,a\n"))
    with pytest.raises(EmptyFile):
        load_csv(_write(tmp_path, "# nothing\n", "b.csv"))


def test_missing_file(tmp_path):
    with pytest.raises(IoError):
        load_csv(tmp_path / "nope.csv")


def test_channel_set_validation():
    with pytest.raises(ValueError):
        ChannelSet({})
    with pytest.raises(ValueError):
        ChannelSet({"a": TimeSeries(np.ones(10), 0.1), "b": TimeSeries(np.ones(11), 0.1)})


def test_write_then_load_round_trip(tmp_path):
    s = generate_ringdown(default_scenario())
    write_channels_csv({"x": s}, tmp_path / "r.csv")
    back = load_csv(tmp_path / "r.csv").channels["x"]
    assert np.array_equal(back.samples, s.samples)


def _tone_set():
    s = reconstruct([Mode(0.2, -0.01, 1.0, 0.3)], 600, 0.1)
    return ChannelSet({"gen": s})


def test_all_methods_on_a_tone():
    table = run_comparison(_tone_set(), METHODS)
    assert [r.method for r in table.rows] == sorted(METHODS)
    assert not table.failures
    for r in table.rows:
        assert abs(r.f_dom - 0.2) < 0.03, r.method
        assert r.deviation(0.2) == pytest.approx(r.f_dom - 0.2)


def test_single_cell():
    table = run_comparison(_tone_set(), ["prony"])
    assert len(table.rows) == 1
    assert table.rows[0].f_dom == pytest.approx(0.2, abs=1e-9)
    assert "digest=" in table.rows[0].config


def test_failure_is_isolated():
    good = reconstruct([Mode(0.2)], 600, 0.1)
    flat = TimeSeries(np.zeros(600), 0.1)
    table = run_comparison(ChannelSet({"flat": flat, "good": good}), ["mpm", "prony", "hms"])
    assert len(table.rows) == 6
    assert {r.channel for r in table.failures} == {"flat"}
    assert all(r.error for r in table.failures)
    assert all(r.f_dom is not None for r in table.rows if r.channel == "good")


def test_method_selection_errors():
    with pytest.raises(NoMethodsSelected):
        run_comparison(_tone_set(), [])
    with pytest.raises(ValueError):
        run_comparison(_tone_set(), ["wavelets"])


def test_band_above_nyquist():
    with pytest.raises(BandAboveNyquist):
        run_comparison(_tone_set(), ["fft"], band=Band(0.1, 6.0))


def test_config_override_changes_digest():
    a = config_digest("prony", PronyConfig(), Band(), "linear")
    b = config_digest("prony", PronyConfig(threshold=1e-6), Band(), "linear")
    assert a != b and a == config_digest("prony", PronyConfig(), Band(), "linear")


def test_csv_and_json_reports(tmp_path):
    table = run_comparison(_tone_set(), ["fft", "mpm"])
    emit_report(table, "csv", tmp_path / "r.csv", tmp_path / "spectra")
    lines = (tmp_path / "r.csv").read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 3
    assert sorted(p.name for p in (tmp_path / "spectra").iterdir()) == ["gen__fft.csv", "gen__mpm.csv"]
    emit_report(table, "json", tmp_path / "r.json")
    doc = json.loads((tmp_path / "r.json").read_text())
    assert doc["reference_hz"] == 0.2
    assert [r["method"] for r in doc["rows"]] == ["fft", "mpm"]
    assert doc["rows"][0]["f_dom_hz"] == table.rows[0].f_dom


def test_error_cell_in_csv():
    flat = TimeSeries(np.zeros(600), 0.1)
    text = render_csv(run_comparison(ChannelSet({"flat": flat}), ["mpm"]))
    row = text.splitlines()[1].split(",")
    assert row[:4] == ["flat", "mpm", "", ""]
    assert row[4].startswith("error=RankZero")


def test_no_reference_leaves_deviation_blank():
    table = run_comparison(_tone_set(), ["fft"], reference_f=None)
    assert render_csv(table).splitlines()[1].split(",")[3] == ""


def test_reports_deterministic_across_workers():
    s = generate_ringdown(default_scenario())
    cs = ChannelSet({"b": s, "a": s.with_samples(-s.samples)})
    serial = run_comparison(cs, METHODS)
    pooled = run_comparison(cs, METHODS, workers=4)
    assert render_csv(serial) == render_csv(pooled)
    assert render_json(serial) == render_json(pooled)
    assert [(r.channel, r.method) for r in serial.rows][:2] == [("a", "fft"), ("a", "gws")]


def test_format_grid():
    text = run_comparison(_tone_set(), METHODS).format_grid()
    assert text.splitlines()[0].split() == ["Method", "gen"]
    assert len(text.splitlines()) == 7
