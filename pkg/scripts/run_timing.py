#!/usr/bin/env python3
"""Measure per-algorithm wall time on 1000-point subsamples and print
the per-(algorithm, m) summary; optionally write the raw rows.
"""

import argparse
import sys

from dpq.bench import (ExperimentConfig, default_datasets, format_timing_report,
                       run_sweep, timing_report)
from dpq.core import PrivacyBudget


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", help="optional results CSV path")
    parser.add_argument("--trials", type=int, default=25)
    parser.add_argument("--m", default="8,16,32,64,120",
                        help="comma-separated m values")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    cfg = ExperimentConfig(
        datasets=default_datasets(),
        m_values=tuple(int(t) for t in args.m.split(",")),
        trials=args.trials,
        budget=PrivacyBudget.pure(1.0),
        seed=args.seed,
    )
    if args.out:
        with open(args.out, "w") as fh:
            rows = run_sweep(cfg, out=fh)
        print(f"wrote {args.out}")
    else:
        rows = run_sweep(cfg)
    print(format_timing_report(timing_report(rows)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
