"""Command-line entry point: ``hetnet-sim run|validate|report``."""
from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, load_config

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hetnet-sim", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a Monte Carlo sweep")
    run.add_argument("--config", required=True, help="key = value config file")
    run.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                     help="override a config key (repeatable)")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--threads", type=int, default=1, help="worker processes")
    run.add_argument("--figures", action="store_true", help="also render PNG figures")

    val = sub.add_parser("validate", help="check a config file and print the resolved sweep")
    val.add_argument("--config", required=True)
    val.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")

    rep = sub.add_parser("report", help="render figures from an existing output directory")
    rep.add_argument("--out", required=True)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s", stream=sys.stderr)

    if args.command == "report":
        from .plotting import render_report

        try:
            for path in render_report(args.out):
                print(path, file=sys.stderr)
        except (OSError, KeyError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_RUNTIME
        return EXIT_OK

    try:
        base, spec, _ = load_config(args.config, args.set)
        cells = spec.cells(base)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "validate":
        print(f"ok: {len(cells)} cells x {spec.num_drops} drops", file=sys.stderr)
        return EXIT_OK

    if args.threads < 1:
        print("config error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    from .runner import run_sweep

    try:
        run_sweep(base, spec, args.out, threads=args.threads, figures=args.figures)
    except Exception as exc:  # noqa: BLE001 - mapped to the runtime exit code
        logging.getLogger(__name__).exception("run failed")
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
