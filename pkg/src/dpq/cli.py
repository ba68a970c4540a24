"""Command line front end: ``dpq bench`` runs an error/timing sweep and
writes the v1 results CSV.

Configuration comes from an optional TOML file plus flag overrides;
flags win. Exits 0 on a complete sweep and 2 if the sweep aborted after
flushing partial results.
"""

from __future__ import annotations

import argparse
import sys

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - version dependent
    import tomli as tomllib

from .baselines import TreeConfig
from .bench import (ALGORITHMS, DEFAULT_RANGE, ExperimentConfig, default_datasets,
                    format_timing_report, run_sweep, timing_report)
from .core import Interval, PrivacyBudget
from .data import CsvColumn, DatasetSpec, SyntheticGaussian, SyntheticUniform


def parse_m_values(text: str) -> tuple[int, ...]:
    """Parse '1,2,4' and '1-120' style lists of m values."""
    values: list[int] = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if "-" in token[1:]:
            lo_s, hi_s = token.split("-", 1)
            lo, hi = int(lo_s), int(hi_s)
            if hi < lo:
                raise ValueError(f"bad m range {token!r}")
            values.extend(range(lo, hi + 1))
        else:
            values.append(int(token))
    if not values:
        raise ValueError(f"no m values in {text!r}")
    return tuple(values)


def _dataset_from_table(table: dict, domain: Interval) -> DatasetSpec:
    kind = table.get("kind")
    name = table.get("name", kind)
    if kind == "uniform":
        source = SyntheticUniform(float(table.get("lo", -5.0)), float(table.get("hi", 5.0)))
    elif kind == "gaussian":
        source = SyntheticGaussian(float(table.get("mean", 0.0)), float(table.get("sd", 5.0)))
    elif kind == "csv":
        source = CsvColumn(str(table["path"]), str(table["column"]))
    else:
        raise ValueError(f"unknown dataset kind {kind!r}")
    return DatasetSpec(name, source, domain)


def _dataset_from_token(token: str, domain: Interval) -> DatasetSpec:
    if token == "uniform":
        return DatasetSpec("uniform", SyntheticUniform(-5.0, 5.0), domain)
    if token == "gaussian":
        return DatasetSpec("gaussian", SyntheticGaussian(0.0, 5.0), domain)
    if token.startswith("csv:"):
        parts = token.split(":")
        if len(parts) != 4:
            raise ValueError(f"csv dataset must be csv:NAME:PATH:COLUMN, got {token!r}")
        return DatasetSpec(parts[1], CsvColumn(parts[2], parts[3]), domain)
    raise ValueError(f"unknown dataset {token!r} (try uniform, gaussian, csv:NAME:PATH:COLUMN)")


def config_from_args(args: argparse.Namespace) -> tuple[ExperimentConfig, str | None, bool]:
    raw: dict = {}
    if args.config:
        with open(args.config, "rb") as fh:
            raw = tomllib.load(fh)

    rng_pair = raw.get("range", [DEFAULT_RANGE.lo, DEFAULT_RANGE.hi])
    if args.range:
        lo_s, hi_s = args.range.split(":")
        rng_pair = [float(lo_s), float(hi_s)]
    domain = Interval(float(rng_pair[0]), float(rng_pair[1]))

    if args.eps is not None and args.rho is not None:
        raise ValueError("--eps and --rho are mutually exclusive")
    if args.eps is not None:
        budget = PrivacyBudget.pure(args.eps)
    elif args.rho is not None:
        budget = PrivacyBudget.zcdp(args.rho)
    elif "eps" in raw:
        budget = PrivacyBudget.pure(float(raw["eps"]))
    elif "rho" in raw:
        budget = PrivacyBudget.zcdp(float(raw["rho"]))
    else:
        budget = PrivacyBudget.pure(1.0)

    if args.m:
        m_values = parse_m_values(args.m)
    elif "m" in raw:
        m_values = tuple(int(v) for v in raw["m"])
    elif "m_range" in raw:
        lo, hi = raw["m_range"]
        m_values = tuple(range(int(lo), int(hi) + 1))
    else:
        m_values = tuple(range(1, 121))

    if args.datasets:
        datasets = [_dataset_from_token(t.strip(), domain)
                    for t in args.datasets.split(",") if t.strip()]
    elif "datasets" in raw:
        datasets = [_dataset_from_table(t, domain) for t in raw["datasets"]]
    else:
        datasets = default_datasets(domain)

    if args.algorithms:
        algorithms = tuple(t.strip() for t in args.algorithms.split(",") if t.strip())
    else:
        algorithms = tuple(raw.get("algorithms", ALGORITHMS))

    tree = None
    if "tree" in raw:
        tree = TreeConfig(int(raw["tree"].get("branching", 2)),
                          int(raw["tree"].get("height", 10)))

    cfg = ExperimentConfig(
        datasets=datasets,
        n_sub=args.n_sub if args.n_sub is not None else int(raw.get("n_sub", 1000)),
        m_values=m_values,
        trials=args.trials if args.trials is not None else int(raw.get("trials", 100)),
        budget=budget,
        domain=domain,
        algorithms=algorithms,
        seed=args.seed if args.seed is not None else int(raw.get("seed", 0)),
        dataset_size=(args.dataset_size if args.dataset_size is not None
                      else int(raw.get("dataset_size", 10000))),
        composition=args.composition or raw.get("composition", "best"),
        delta=args.delta if args.delta is not None else float(raw.get("delta", 1e-6)),
        tree=tree,
        agg_truncate=args.agg_truncate or bool(raw.get("agg_truncate", False)),
        time_sort=args.time_sort or bool(raw.get("time_sort", False)),
    )
    out = args.out if args.out is not None else raw.get("out")
    return cfg, out, args.timing or bool(raw.get("timing", False))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dpq",
                                     description="Differentially private quantile benchmarks")
    sub = parser.add_subparsers(dest="command", required=True)
    bench = sub.add_parser("bench", help="run an error/timing sweep")
    bench.add_argument("--config", help="TOML config file")
    bench.add_argument("--eps", type=float, help="pure-DP budget epsilon")
    bench.add_argument("--rho", type=float, help="zCDP budget rho")
    bench.add_argument("--m", help="quantile counts, e.g. '1,2,4' or '1-120'")
    bench.add_argument("--trials", type=int)
    bench.add_argument("--seed", type=int)
    bench.add_argument("--out", help="results CSV path (stdout if omitted)")
    bench.add_argument("--datasets",
                       help="comma list: uniform, gaussian, csv:NAME:PATH:COLUMN")
    bench.add_argument("--algorithms", help=f"comma subset of {','.join(ALGORITHMS)}")
    bench.add_argument("--n-sub", dest="n_sub", type=int,
                       help="per-trial subsample size (default 1000)")
    bench.add_argument("--dataset-size", dest="dataset_size", type=int,
                       help="materialized base dataset size (default 10000)")
    bench.add_argument("--range", help="release domain as LO:HI (default -100:100)")
    bench.add_argument("--composition", choices=["basic", "advanced", "best"],
                       help="IndExp composition rule (default best)")
    bench.add_argument("--delta", type=float, help="delta for advanced composition")
    bench.add_argument("--agg-truncate", action="store_true",
                       help="clip negative leaf counts in the tree readout")
    bench.add_argument("--time-sort", action="store_true",
                       help="include re-sorting the sample in timings")
    bench.add_argument("--timing", action="store_true",
                       help="print a per-(algorithm, m) timing summary")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command != "bench":  # pragma: no cover - argparse enforces this
        parser.error("unknown command")
    try:
        cfg, out_path, want_timing = config_from_args(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    stream = open(out_path, "w") if out_path else sys.stdout
    try:
        rows = run_sweep(cfg, out=stream)
    except Exception as exc:  # partial results are already flushed
        print(f"error: sweep aborted: {exc}", file=sys.stderr)
        return 2
    finally:
        if out_path:
            stream.close()
    if want_timing:
        print(format_timing_report(timing_report(rows)),
              file=sys.stderr if not out_path else sys.stdout)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
