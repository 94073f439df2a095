"""CSV ingestion, cross-method comparison and report emission.

Input files are plain CSV::

    # optional comment lines
    time_s,unit_a,unit_b
    0.0,60.001,59.998
    0.1,60.002,59.999

Every channel is detrended, passed to each requested method and the dominant
frequency is recorded in a channel x method grid.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import Band, PowerSpectrum, TimeSeries, detrend, validate_series
from .errors import (
    EmptyFile,
    IoError,
    ModalKitError,
    NoMethodsSelected,
    NonUniformSampling,
    ParseError,
)
from .fourier import FourierConfig, dominant_mode_fft
from .hht import HhtConfig, dominant_mode_hms
from .matrix_pencil import PencilConfig, dominant_mode_mpm
from .prony import PronyConfig, dominant_mode_prony, prony_energy_spectrum
from .stransform import dominant_mode_st, stransform
from .wavelet_gws import WaveletConfig, dominant_mode_gws

METHODS = ("fft", "prony", "mpm", "st", "gws", "hms")
METHOD_NAMES = {
    "fft": "Fourier transform",
    "prony": "Prony's method",
    "mpm": "Matrix Pencil Method",
    "st": "S-transform",
    "gws": "Global Wavelet Spectrum",
    "hms": "Hilbert Marginal Spectrum",
}
DT_TOLERANCE = 1e-6
REFERENCE_HZ = 0.2
CSV_COLUMNS = ("channel", "method", "f_dom_hz", "deviation_hz", "config")


def default_configs() -> dict:
    """Per-method defaults; the pencil uses a noise-floor rank threshold."""
    return {
        "fft": FourierConfig(),
        "prony": PronyConfig(),
        "mpm": PencilConfig(threshold=1e-3),
        "st": None,
        "gws": WaveletConfig(),
        "hms": HhtConfig(),
    }


@dataclass(frozen=True, eq=False)
class ChannelSet:
    channels: dict[str, TimeSeries]

    def __post_init__(self):
        if not self.channels:
            raise ValueError("ChannelSet needs at least one channel")
        series = list(self.channels.values())
        if len({s.n for s in series}) != 1 or len({s.dt for s in series}) != 1:
            raise ValueError("channels must share length and dt")

    @property
    def dt(self) -> float:
        return next(iter(self.channels.values())).dt

    @property
    def labels(self) -> list[str]:
        return list(self.channels)


@dataclass(eq=False)
class ComparisonRow:
    channel: str
    method: str
    f_dom: float | None
    config: str
    error: str | None = None
    spectrum: PowerSpectrum | None = field(default=None, repr=False)

    def deviation(self, reference_f: float | None) -> float | None:
        if self.f_dom is None or reference_f is None:
            return None
        return self.f_dom - reference_f


@dataclass(eq=False)
class ComparisonTable:
    rows: list[ComparisonRow]
    reference_f: float | None = REFERENCE_HZ
    band: Band = Band()

    @property
    def failures(self) -> list[ComparisonRow]:
        return [r for r in self.rows if r.error is not None]

    def grid(self) -> dict[str, dict[str, float | None]]:
        """``{method: {channel: f_dom}}``, the layout of a method-by-unit table."""
        out: dict[str, dict[str, float | None]] = {}
        for r in self.rows:
            out.setdefault(r.method, {})[r.channel] = r.f_dom
        return out

    def format_grid(self) -> str:
        channels = sorted({r.channel for r in self.rows})
        grid = self.grid()
        width = max([len(METHOD_NAMES[m]) for m in grid] + [6])
        lines = ["Method".ljust(width) + "".join(f"{c:>14}" for c in channels)]
        for m in METHODS:
            if m not in grid:
                continue
            cells = []
            for c in channels:
                f = grid[m].get(c)
                cells.append(f"{'fail' if f is None else f'{f:.4f}':>14}")
            lines.append(METHOD_NAMES[m].ljust(width) + "".join(cells))
        return "\n".join(lines)


def load_csv(path) -> ChannelSet:
    """Read a ``time_s,<label>...`` file into a uniformly sampled ChannelSet.

    Raises
    ------
    EmptyFile
        No header or no data rows.
    ParseError
        Wrong field count or a non-numeric field; carries the line number.
    NonUniformSampling
        A time step deviates from the median step by more than 1e-6 s.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(str(exc)) from exc

    header = None
    lines, rows = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in next(csv.reader([line]))]
        if header is None:
            header = fields
            if len(header) < 2:
                raise ParseError(lineno, "header needs a time column and at least one channel")
            if len(set(header[1:])) != len(header) - 1:
                raise ParseError(lineno, "duplicate channel labels")
            continue
        if len(fields) != len(header):
            raise ParseError(lineno, f"expected {len(header)} fields, got {len(fields)}")
        try:
            rows.append([float(f) for f in fields])
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
        lines.append(lineno)
    if header is None or not rows:
        raise EmptyFile(f"{path} has no data rows")

    data = np.array(rows)
    t = data[:, 0]
    if t.size < 2:
        raise NonUniformSampling(lines[0], "a single row has no sampling interval")
    steps = np.diff(t)
    dt = float(np.median(steps))
    if not dt > 0:
        raise NonUniformSampling(lines[1], f"median time step {dt} is not positive")
    bad = np.flatnonzero(np.abs(steps - dt) > DT_TOLERANCE)
    if bad.size:
        i = int(bad[0]) + 1
        raise NonUniformSampling(
            lines[i], f"time {t[i]!r} deviates from uniform step {dt!r} s")
    channels = {
        label: validate_series(data[:, j + 1], dt, t0=float(t[0]), label=label)
        for j, label in enumerate(header[1:])
    }
    return ChannelSet(channels)


def _describe(cfg) -> dict:
    if cfg is None:
        return {}
    return dataclasses.asdict(cfg)


def config_digest(method: str, cfg, band: Band, detrend_policy: str) -> str:
    """``key=value`` summary of a cell's configuration with a short hash."""
    params = _describe(cfg)
    params.update(band=str(band), detrend=detrend_policy)
    canon = json.dumps({"method": method, **params}, sort_keys=True)
    digest = hashlib.sha256(canon.encode()).hexdigest()[:12]
    body = ";".join(f"{k}={params[k]}" for k in sorted(params))
    return f"{body};digest={digest}"


def _run_method(method: str, series: TimeSeries, cfg, band: Band):
    """Dispatch one method; returns ``(f_dom, spectrum, extra_metadata)``."""
    if method == "fft":
        f, ps = dominant_mode_fft(series, cfg, band)
        return f, ps, {}
    if method == "prony":
        mode, ps = dominant_mode_prony(series, cfg, band)
        return mode.f, ps, {"modes": len(ps), "alpha": mode.alpha}
    if method == "mpm":
        mode, modes = dominant_mode_mpm(series, cfg, band)
        return mode.f, prony_energy_spectrum(modes, series.duration), {
            "modes": len(modes), "alpha": mode.alpha}
    if method == "st":
        return (*dominant_mode_st(stransform(series, band), band), {})
    if method == "gws":
        return (*dominant_mode_gws(series, cfg, band), {})
    if method == "hms":
        return (*dominant_mode_hms(series, cfg, band), {})
    raise ValueError(f"unknown method {method!r}")


def run_comparison(channels: ChannelSet, methods, band: Band = Band(),
                   configs: dict | None = None, detrend_policy: str = "linear",
                   reference_f: float | None = REFERENCE_HZ,
                   workers: int | None = None) -> ComparisonTable:
    """Dominant frequency for every (channel, method) pair.

    A failing cell is recorded with its error and never aborts the table.
    Rows come back sorted by (channel, method) whatever the worker count.
    """
    methods = sorted(set(methods))
    if not methods:
        raise NoMethodsSelected("no methods selected")
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ValueError(f"unknown methods: {', '.join(unknown)}")
    for s in channels.channels.values():
        validate_series(s.samples, s.dt, band=band)
    cfgs = default_configs()
    cfgs.update(configs or {})

    cells = [(label, m) for label in sorted(channels.channels) for m in methods]
    prepared = {label: detrend(channels.channels[label], detrend_policy)
                for label in channels.channels}

    def run(cell):
        label, method = cell
        desc = config_digest(method, cfgs[method], band, detrend_policy)
        try:
            f, spectrum, extra = _run_method(method, prepared[label], cfgs[method], band)
        except (ModalKitError, np.linalg.LinAlgError) as exc:
            return ComparisonRow(label, method, None, desc, f"{type(exc).__name__}: {exc}")
        if extra:
            desc = ";".join(f"{k}={extra[k]!r}" for k in sorted(extra)) + ";" + desc
        return ComparisonRow(label, method, float(f), desc, None, spectrum)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, cells))
    else:
        rows = [run(c) for c in cells]
    return ComparisonTable(rows, reference_f, band)


def _fmt(x: float | None) -> str:
    return "" if x is None else repr(float(x))


def report_records(table: ComparisonTable) -> list[dict]:
    return [
        {
            "channel": r.channel,
            "method": r.method,
            "f_dom_hz": r.f_dom,
            "deviation_hz": r.deviation(table.reference_f),
            "config": r.config,
            "error": r.error,
        }
        for r in table.rows
    ]


def render_csv(table: ComparisonTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in report_records(table):
        config = rec["config"] if rec["error"] is None else f"error={rec['error']};{rec['config']}"
        writer.writerow([rec["channel"], rec["method"], _fmt(rec["f_dom_hz"]),
                         _fmt(rec["deviation_hz"]), config])
    return buf.getvalue()


def render_json(table: ComparisonTable) -> str:
    doc = {
        "band": [table.band.f_lo, table.band.f_hi],
        "reference_hz": table.reference_f,
        "rows": report_records(table),
    }
    return json.dumps(doc, indent=2) + "\n"


def _safe_name(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", text) or "channel"


def emit_report(table: ComparisonTable, fmt: str, path, spectra_dir=None) -> None:
    """Write the table as CSV or JSON; optionally one ``freq,power`` file per cell."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown report format {fmt!r}")
    text = render_csv(table) if fmt == "csv" else render_json(table)
    try:
        Path(path).write_text(text, encoding="utf-8")
        if spectra_dir is not None:
            out = Path(spectra_dir)
            out.mkdir(parents=True, exist_ok=True)
            for r in table.rows:
                if r.spectrum is None:
                    continue
                lines = ["freq_hz,power"]
                lines += [f"{f!r},{p!r}" for f, p in
                          zip(r.spectrum.freqs.tolist(), r.spectrum.power.tolist())]
                name = f"{_safe_name(r.channel)}__{r.method}.csv"
                (out / name).write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(str(exc)) from exc


def write_channels_csv(channels: dict[str, TimeSeries], path) -> None:
    """Write series sharing dt and length in the ingestion CSV format."""
    series = list(channels.values())
    t = series[0].times
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["time_s", *channels])
    for i in range(t.size):
        writer.writerow([repr(float(t[i]))] + [repr(float(s.samples[i])) for s in series])
    try:
        Path(path).write_text(buf.getvalue(), encoding="utf-8")
    except OSError as exc:
        raise IoError(str(exc)) from exc
