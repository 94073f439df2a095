"""Command line entry point ``modal-kit``.

Exit codes: 0 success, 1 input error, 2 some comparison cells failed (the
report is still written).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .core import Band
from .errors import ModalKitError
from .harness import (
    METHODS,
    emit_report,
    load_csv,
    run_comparison,
    write_channels_csv,
)
from .matrix_pencil import PencilConfig, sliding_dominant
from .synth import SynthSpec, generate_ringdown

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

log = logging.getLogger("modal_kit")

EXIT_OK, EXIT_INPUT, EXIT_CELLS = 0, 1, 2


def _methods(text: str) -> list[str]:
    names = [m.strip() for m in text.split(",") if m.strip()]
    unknown = [m for m in names if m not in METHODS]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown method(s): {', '.join(unknown)}")
    return names


def _band(text: str) -> Band:
    try:
        return Band.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad band {text!r}: {exc}") from None


def cmd_analyze(args) -> int:
    channels = load_csv(args.input)
    table = run_comparison(channels, args.methods, args.band,
                           detrend_policy=args.detrend,
                           reference_f=args.reference_hz, workers=args.workers)
    fmt = "json" if args.json else "csv"
    emit_report(table, fmt, args.out, args.spectra_dir)
    print(table.format_grid())
    for row in table.failures:
        log.warning("%s/%s failed: %s", row.channel, row.method, row.error)
    return EXIT_CELLS if table.failures else EXIT_OK


def cmd_synth(args) -> int:
    path = Path(args.spec)
    raw = path.read_bytes()
    if path.suffix.lower() == ".toml":
        data = tomllib.loads(raw.decode("utf-8"))
    else:
        data = json.loads(raw)
    spec = SynthSpec.from_dict(data)
    label = str(data.get("label", "synth"))
    write_channels_csv({label: generate_ringdown(spec, label)}, args.out)
    return EXIT_OK


def cmd_window(args) -> int:
    channels = load_csv(args.input)
    if args.channel not in channels.channels:
        raise ModalKitError(f"no channel {args.channel!r}; have {', '.join(channels.labels)}")
    cfg = PencilConfig(threshold=args.threshold, window_len_s=args.window, step_s=args.step)
    reports = sliding_dominant(channels.channels[args.channel], cfg, args.band,
                               detrend_policy=args.detrend)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["window_start_s", "window_len_s", "f_hz", "alpha",
                         "amplitude", "phase", "energy", "n_modes"])
        for r in reports:
            d = r.dominant
            writer.writerow([repr(r.window_start_s), repr(r.window_len_s), repr(d.f),
                             repr(d.alpha), repr(d.amplitude), repr(d.phase),
                             repr(d.energy), len(r.all_modes)])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modal-kit", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="dominant mode per channel and method")
    p.add_argument("--input", required=True)
    p.add_argument("--methods", type=_methods, default=list(METHODS))
    p.add_argument("--band", type=_band, default=Band())
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true", help="write JSON instead of CSV")
    p.add_argument("--spectra-dir")
    p.add_argument("--reference-hz", type=float, default=0.2)
    p.add_argument("--detrend", choices=("linear", "mean"), default="linear")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synth", help="generate a synthetic ringdown CSV")
    p.add_argument("--spec", required=True, help="TOML or JSON synth spec")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("window", help="sliding-window matrix pencil dominant modes")
    p.add_argument("--input", required=True)
    p.add_argument("--channel", required=True)
    p.add_argument("--window", type=float, required=True, help="window length, s")
    p.add_argument("--step", type=float, required=True, help="stride, s")
    p.add_argument("--band", type=_band, default=Band())
    p.add_argument("--threshold", type=float, default=1e-3)
    p.add_argument("--detrend", choices=("linear", "mean"), default="linear")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_window)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ModalKitError, ValueError, OSError, KeyError) as exc:
        print(f"modal-kit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
