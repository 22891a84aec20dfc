"""Command-line entry point: ``plot --spec <json>``.

Exit codes: 0 success, 2 spec or schema error.
"""

from __future__ import annotations

import argparse
import sys

from .render import PlotSpec, render
from .schema import SchemaError


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render figures from simulator CSV output."
    )
    parser.add_argument("--spec", required=True, help="path to the JSON plot specification")
    args = parser.parse_args(argv)
    try:
        spec = PlotSpec.from_json(args.spec)
        out = render(spec)
    except (ValueError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
