"""plot <kind> <csv...> -o <file> [--meta <json>] command-line front end."""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, PlotJob, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="latticeplot",
        description="Render drivenlattice CSV outputs as figure panels")
    ap.add_argument("kind", choices=KINDS)
    ap.add_argument("csv", nargs="+", help="input CSV file(s), one panel each")
    ap.add_argument("-o", "--output", required=True, help="output SVG or PNG")
    ap.add_argument("--meta", default=None,
                    help="JSON sidecar with analytic t_cl/t_rev/t_spr markers")
    ap.add_argument("--log-y", action="store_true")
    ap.add_argument("--zoom", type=float, nargs=2, metavar=("T0", "T1"),
                    help="time window for autocorr panels")
    ap.add_argument("--title", default=None)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        job = PlotJob(kind=args.kind, inputs=args.csv, output=args.output,
                      meta=args.meta, log_y=args.log_y,
                      zoom=tuple(args.zoom) if args.zoom else None,
                      title=args.title)
        out = render(job)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
