#!/usr/bin/env python3
"""Run the error sweeps behind the accuracy figures.

Desk preset keeps the runtime in minutes; --full switches to the
publication-scale protocol (m = 1..120, 100 trials). Writes one CSV per
budget mode, ready for dpq-plot.
"""

import argparse
import sys
from pathlib import Path

from dpq.bench import ExperimentConfig, default_datasets, run_sweep
from dpq.core import PrivacyBudget


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results", help="output directory")
    parser.add_argument("--full", action="store_true",
                        help="m = 1..120 and 100 trials (slow)")
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if args.full:
        m_values = tuple(range(1, 121))
        trials = args.trials or 100
    else:
        m_values = (1, 2, 4, 8, 16, 32, 64, 120)
        trials = args.trials or 25

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    budgets = {
        "dp": PrivacyBudget.pure(1.0),
        "zcdp": PrivacyBudget.zcdp(0.5),
    }
    for tag, budget in budgets.items():
        cfg = ExperimentConfig(
            datasets=default_datasets(),
            m_values=m_values,
            trials=trials,
            budget=budget,
            seed=args.seed,
        )
        path = out_dir / f"errors_{tag}.csv"
        with open(path, "w") as fh:
            run_sweep(cfg, out=fh)
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
