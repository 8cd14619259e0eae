"""Command-line front end: simulate, validate-config, print-defaults."""

from __future__ import annotations

import argparse
import sys

from .config import SystemConfig, config_to_text, load_config, parse_config_text
from .errors import AerolinkError, ConfigurationError
from .harness import run_sweep, write_csv


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aerolink",
        description="System-level simulator for cellular networks with co-existing "
        "terrestrial UEs and cellular-connected UAVs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the Monte Carlo sweep and write a CSV")
    sim.add_argument("--config", required=True, help="path to a key-value config file")
    sim.add_argument("--out", required=True, help="output CSV path")
    sim.add_argument("--seed", type=int, help="override master_seed")
    sim.add_argument("--drops", type=int, help="override n_drops")
    sim.add_argument("--scheme", help="override scheme selection: 1..5, comma list, or 'all'")
    sim.add_argument("--direction", help="override direction: ul, dl, or both")
    sim.add_argument("--ues", help="override the terrestrial UE sweep, e.g. 20,40,80")
    sim.add_argument(
        "--throughput",
        action="store_true",
        help="report absolute throughput (rate x RB bandwidth) instead of bps/Hz",
    )

    val = sub.add_parser("validate-config", help="check a config file without running")
    val.add_argument("--config", required=True, help="path to a key-value config file")

    sub.add_parser("print-defaults", help="print the default configuration as a config file")
    return parser


def _apply_overrides(cfg: SystemConfig, args: argparse.Namespace) -> SystemConfig:
    overrides = []
    if args.seed is not None:
        overrides.append(f"master_seed = {args.seed}")
    if args.drops is not None:
        overrides.append(f"n_drops = {args.drops}")
    if args.scheme is not None:
        overrides.append(f"scheme = {args.scheme}")
    if args.direction is not None:
        overrides.append(f"direction = {args.direction}")
    if args.ues is not None:
        overrides.append(f"n_ues = {args.ues}")
    return parse_config_text("\n".join(overrides), cfg)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "print-defaults":
            sys.stdout.write(config_to_text(SystemConfig()))
            return 0
        if args.command == "validate-config":
            cfg = load_config(args.config)
            cfg.validate()
            print(f"{args.config}: ok")
            return 0
        cfg = _apply_overrides(load_config(args.config), args)
        cfg.validate()
        result = run_sweep(cfg, progress=True)
        scale = cfg.rb_bandwidth_hz if args.throughput else 1.0
        write_csv(result, args.out, rate_scale=scale)
        print(f"[aerolink] wrote {len(result.rows)} rows to {args.out}", file=sys.stderr)
        return 0
    except ConfigurationError as exc:
        print(f"aerolink: config error: {exc}", file=sys.stderr)
        return 2
    except AerolinkError as exc:
        print(f"aerolink: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
