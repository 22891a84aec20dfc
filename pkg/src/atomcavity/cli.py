"""Command-line entry point.

    sim <scenario> --config <file> [--out <path>] [--format csv|json] [--threads N]
    sim validate --config <file>
    sim list-scenarios

Exit codes: 0 success, 2 configuration error, 3 capacity error, 4 numerical
guard tripped.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import SCENARIOS, load_config
from .errors import SimulationError
from .scenarios import run_scenario
from .tableio import write_document


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sim",
        description="Scenario-driven simulator for an atom coupled to a vibrating-mirror cavity.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list-scenarios", help="print the available scenario names")

    val = sub.add_parser("validate", help="validate a configuration file and exit")
    val.add_argument("--config", required=True, help="path to the JSON configuration")

    for name in SCENARIOS:
        sc = sub.add_parser(name, help=f"run the {name} scenario")
        sc.add_argument("--config", required=True, help="path to the JSON configuration")
        sc.add_argument("--out", default=None, help="output path (default from config or scenario name)")
        sc.add_argument("--format", default=None, choices=("csv", "json"), help="output format")
        sc.add_argument("--threads", type=int, default=1, help="parallel workers for scenario items")
    return parser


def _output_paths(base: Path, items) -> list[Path]:
    if len(items) == 1 and items[0][0] == "":
        return [base]
    return [base.with_name(f"{base.stem}.{suffix}{base.suffix}") for suffix, _ in items]


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "list-scenarios":
        for name in SCENARIOS:
            print(name)
        return 0

    try:
        cfg = load_config(args.config)
        if args.command == "validate":
            print(f"OK: {args.config} is a valid {cfg.scenario!r} configuration")
            return 0
        if cfg.scenario != args.command:
            print(
                f"error: config declares scenario {cfg.scenario!r}, "
                f"but {args.command!r} was requested",
                file=sys.stderr,
            )
            return 2
        if args.format:
            cfg.output_format = args.format
        fmt = cfg.output_format
        out = args.out or cfg.output_path or f"{cfg.scenario}.{fmt}"
        base = Path(out)
        if base.suffix.lower() != f".{fmt}":
            base = base.with_suffix(f".{fmt}")
        items = run_scenario(cfg, threads=max(args.threads, 1))
        paths = _output_paths(base, items)
        if base.parent and not base.parent.exists():
            base.parent.mkdir(parents=True, exist_ok=True)
        for path, (_, doc) in zip(paths, items):
            write_document(path, doc, fmt)
            print(f"wrote {path}")
        return 0
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
