"""Command line entry point.

    serreswan verify --config run.json [--seed N] [--samples N] [--report out.json]
    serreswan export --config run.json --observable sigma_z --grid 16 --out f.csv

``verify`` exits 0 when every suite passes, 1 on a failing suite and 2 on
a malformed config. ``export`` exits 2 on any validation error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from ..errors import ConfigError, ExportError
from .config import load_config
from .export import export_csv, load_observable
from .suites import run_all

log = logging.getLogger("serreswan")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="serreswan")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the verification suites")
    v.add_argument("--config", required=True)
    v.add_argument("--seed", type=int)
    v.add_argument("--samples", type=int)
    v.add_argument("--report", help="write the JSON report here (default: stdout)")

    e = sub.add_parser("export", help="export f_A on a Bloch-sphere grid as CSV")
    e.add_argument("--config", required=True)
    e.add_argument("--observable", required=True, help="unit, sigma_x, sigma_y, sigma_z, random, or a file")
    e.add_argument("--grid", type=int, required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--block", type=int, default=1, help="1-based id of the M_2 block (default 1)")
    return p


def _verify(args) -> int:
    try:
        config = load_config(args.config).with_overrides(seed=args.seed, samples=args.samples)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = run_all(config)
    for s in report["suites"]:
        status = "PASS" if s["pass"] else "FAIL"
        print(f"{status} {s['suite']:<15} cases={s['cases']:<6} worst/tol={s['max_residual']:.3g}", file=sys.stderr)
    text = json.dumps(report, indent=2) + "\n"
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["pass"] else 1


def _export(args) -> int:
    try:
        config = load_config(args.config)
        obs = load_observable(args.observable, config.seed)
        n = export_csv(config, obs, args.grid, args.out, args.block)
    except (ConfigError, ExportError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    log.info("wrote %d rows to %s", n, args.out)
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(message)s")
    args = _parser().parse_args(argv)
    if args.command == "verify":
        return _verify(args)
    return _export(args)


if __name__ == "__main__":
    sys.exit(main())
