"""Run the 10-seed x 30-day calibration and write results/calibration.{json,txt}."""

from __future__ import annotations

import argparse
import os
from pathlib import Path

from ontotwin.harness import CALIBRATION_CONFIGS, run_calibration


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--first-seed", type=int, default=42)
    ap.add_argument("--days", type=int, default=30)
    ap.add_argument("--workers", type=int, default=min(4, os.cpu_count() or 1))
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()

    seeds = range(args.first_seed, args.first_seed + args.seeds)
    report = run_calibration(CALIBRATION_CONFIGS, seeds, args.days, workers=args.workers)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "calibration.json").write_text(report.to_json() + "\n", encoding="utf-8")
    (out / "calibration.txt").write_text(report.to_text() + "\n", encoding="utf-8")
    print(report.to_text())


if __name__ == "__main__":
    main()
