"""Median resolve() latency on a built-in snapshot vs. a widened 10,000-station one."""

from __future__ import annotations

import argparse

from ontotwin.benchmark import compare_resolve_latency, widened_snapshot
from ontotwin.ontology import template_snapshot


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--template", default="aerospace")
    ap.add_argument("--stations", type=int, default=10_000)
    ap.add_argument("--calls", type=int, default=100_000)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    small = template_snapshot(args.template)
    wide = widened_snapshot(args.template, args.stations)
    a, b = compare_resolve_latency(small, wide, args.calls, args.repeats)
    print(f"{len(small.document['STATIONS']):>6} stations: median {a:.0f} ns")
    print(f"{args.stations:>6} stations: median {b:.0f} ns")
    print(f"ratio {b / a:.2f} (limit 2.00)")


if __name__ == "__main__":
    main()
