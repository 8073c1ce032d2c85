"""Command-line front end: ``mdiqkd {table1,scan,optimize}``."""
from __future__ import annotations

import argparse
import logging
import math
import sys
from typing import List, Optional

from .channel import IntensityTriple
from .config import ConfigError, RunConfig, apply_overrides, load_config
from .finite_key import ASYMPTOTIC, FluctuationConfig
from .keyrate import INFINITE, VACUUM_WEAK, ScanRecord, evaluate_point, optimize_intensities
from .records import format_csv, format_json, to_row, write_atomic

log = logging.getLogger("mdiqkd")

EXIT_CONFIG = 2
EXIT_IO = 3

# published comparison point: eta_a = eta_b = 0.1, mu2 = nu2 = 0.36
TABLE1_REFERENCE = {"y11_z": 4.1967e-3, "e11_x": 2.7241e-2, "R": 1.3548e-4}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="flat key = value config file")
    p.add_argument("--eta", metavar="LIST", help="comma-separated per-arm transmissions")
    p.add_argument("--n-samples", metavar="LIST", help="comma-separated N per cell (inf allowed)")
    p.add_argument("--method", metavar="LIST", help="vacuum+weak, infinite or both")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    p.add_argument("--grid", metavar="LO:HI:STEP", help="intensity grid")
    p.add_argument("--n-alpha", metavar="X", help="standard deviations for fluctuation")
    p.add_argument("--mu2", metavar="X", help="signal intensity for table1")
    p.add_argument("--mu1", metavar="X", help="fix the decoy intensity for table1")
    p.add_argument("--distance", action="store_true",
                   help="add a distance column assuming 0.2 dB/km per arm")
    p.add_argument("--workers", type=int, default=1, help="processes for the grid search")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mdiqkd",
        description="Vacuum+weak decoy-state MDI-QKD bounds, key rates and intensity scans.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("table1", "bounds and key rate at the published comparison point"),
        ("scan", "optimized key rate versus transmission, per method and N"),
        ("optimize", "optimal signal/decoy intensities per transmission"),
    ):
        _add_common(sub.add_parser(name, help=help_text))
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    overrides = {}
    for attr, key in (("eta", "eta"), ("n_samples", "N"), ("method", "method"),
                      ("format", "format"), ("out", "out"), ("grid", "grid"),
                      ("n_alpha", "n_alpha"), ("mu2", "mu2"), ("mu1", "mu1")):
        value = getattr(args, attr)
        if value is not None:
            overrides[key] = value
    if args.distance:
        overrides["distance"] = "true"
    return apply_overrides(cfg, overrides)


def run_scan(cfg: RunConfig, workers: int = 1) -> List[ScanRecord]:
    records = []
    for eta in cfg.etas:
        p = cfg.channel.with_eta(eta)
        for method in cfg.methods:
            Ns = (math.inf,) if method == INFINITE else cfg.N
            for N in Ns:
                fc = ASYMPTOTIC if math.isinf(N) else FluctuationConfig(cfg.n_alpha, N)
                point = optimize_intensities(p, cfg.grid, fc, method, workers=workers)
                log.info("eta=%g method=%s N=%g R=%.4e", eta, method, N, point.R)
                records.append(ScanRecord(eta, method, N, point))
    return records


def run_table1(cfg: RunConfig, workers: int = 1) -> List[ScanRecord]:
    records = []
    for eta in cfg.etas:
        p = cfg.channel.with_eta(eta)
        if cfg.mu1 is None:
            point = optimize_intensities(p, cfg.grid, ASYMPTOTIC, VACUUM_WEAK,
                                         signal=cfg.mu2, workers=workers)
        else:
            intens = IntensityTriple(cfg.mu1, cfg.mu2)
            point = evaluate_point(p, intens, intens)
        records.append(ScanRecord(eta, VACUUM_WEAK, math.inf, point))
    return records


def table1_report(records: List[ScanRecord]) -> str:
    lines = [f"{'eta':>6} {'mu2':>6} {'mu1':>6} {'Y11^z':>12} {'e11^x':>9} {'R':>12}"]
    for rec in records:
        pt = rec.point
        lines.append(f"{rec.eta:6.3g} {pt.alice.mu2:6.2f} {pt.alice.mu1:6.2f} "
                     f"{pt.y11_z:12.4e} {100 * pt.e11_x:8.4f}% {pt.R:12.4e}")
        if math.isclose(rec.eta, 0.1) and math.isclose(pt.alice.mu2, 0.36):
            ref = TABLE1_REFERENCE
            lines.append(f"{'published':>20} {ref['y11_z']:12.4e} {100 * ref['e11_x']:8.4f}% "
                         f"{ref['R']:12.4e}")
    return "\n".join(lines) + "\n"


def optimize_report(records: List[ScanRecord]) -> str:
    lines = [f"{'eta':>6} {'method':>12} {'N':>8} {'mu2':>6} {'mu1':>6} {'R':>12}"]
    for rec in records:
        pt = rec.point
        mu2 = pt.alice.mu2 if pt.alice else math.nan
        mu1 = pt.alice.mu1 if pt.alice else math.nan
        lines.append(f"{rec.eta:6.3g} {rec.method:>12} {rec.N:8.2g} {mu2:6.2f} {mu1:6.2f} {pt.R:12.4e}")
    return "\n".join(lines) + "\n"


def _serialize(cfg: RunConfig, records: List[ScanRecord]) -> str:
    rows = [to_row(r, cfg.distance) for r in records]
    return format_json(rows) if cfg.format == "json" else format_csv(rows)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = resolve_config(args)
        if args.command == "table1":
            records = run_table1(cfg, args.workers)
            report = table1_report(records)
        elif args.command == "scan":
            records = run_scan(cfg, args.workers)
            report = None
        else:
            records = run_scan(cfg, args.workers)
            report = optimize_report(records)
    except (ConfigError, ValueError) as exc:
        print(f"mdiqkd: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if report is not None:
        sys.stdout.write(report)
    if cfg.out:
        try:
            write_atomic(cfg.out, _serialize(cfg, records))
        except OSError as exc:
            print(f"mdiqkd: error: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    elif report is None:
        sys.stdout.write(_serialize(cfg, records))
    return 0


if __name__ == "__main__":
    sys.exit(main())
