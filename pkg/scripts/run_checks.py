"""Run every verification suite on a grid and write one JSON report per suite."""

import argparse
import sys
from pathlib import Path

from mp2newforms.cli import render_report
from mp2newforms.suites import SUITES, RunConfig, run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", default="default")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=Path("reports"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    worst = 0
    for name in SUITES:
        report = run_suite(name, RunConfig(seed=args.seed, grid=args.grid))
        (args.out / f"{name}.json").write_text(render_report(report, "json", timing=False))
        s = report.summary()
        print(f"{name:12s} {'ok' if report.passed else 'FAILED':6s} {s['passed']}/{s['total']} skipped {s['skipped']}")
        worst = max(worst, 0 if report.passed else 1)
    return worst


if __name__ == "__main__":
    sys.exit(main())
