"""Benchmark harness: error sweeps over the number of quantiles, both
budget kinds, per-trial wall-clock timing, and CSV emission.

Rows are keyed (dataset, algorithm, m, trial) and generated in that
order. All randomness derives from the config seed through fixed fork
labels, so a sweep replays bit-identically regardless of how it is
chunked; only the wall_ns column varies between replays.
"""

from __future__ import annotations

import io
import time
from dataclasses import dataclass, field, replace
from hashlib import sha256
from statistics import mean, median
from typing import Iterable, Sequence

from .aq import approximate_quantiles, rank_errors
from .baselines import (ADVANCED, BASIC, TreeConfig, agg_tree_build,
                        agg_tree_quantile, ind_exp, ind_exp_per_call_eps)
from .core import (PURE_DP, Interval, PrivacyBudget, QuantileRequest,
                   RandomSource, SortedDataset)
from .data import DatasetSpec, SyntheticGaussian, SyntheticUniform, generate, subsample

CSV_HEADER_COMMENT = "# dpq-results v1"
CSV_COLUMNS = ("dataset", "algorithm", "m", "trial", "avg_gap", "err_max",
               "wall_ns", "seed")

ALG_AQ = "AQ"
ALG_IND_EXP = "IndExp"
ALG_AGG_TREE = "AggTree"
ALGORITHMS = (ALG_AQ, ALG_IND_EXP, ALG_AGG_TREE)

DEFAULT_RANGE = Interval(-100.0, 100.0)


def default_datasets(domain: Interval = DEFAULT_RANGE) -> list[DatasetSpec]:
    return [
        DatasetSpec("uniform", SyntheticUniform(-5.0, 5.0), domain),
        DatasetSpec("gaussian", SyntheticGaussian(0.0, 5.0), domain),
    ]


@dataclass
class ExperimentConfig:
    datasets: list[DatasetSpec] = field(default_factory=default_datasets)
    n_sub: int = 1000
    m_values: tuple[int, ...] = tuple(range(1, 121))
    trials: int = 100
    budget: PrivacyBudget = PrivacyBudget.pure(1.0)
    domain: Interval = DEFAULT_RANGE
    algorithms: tuple[str, ...] = ALGORITHMS
    seed: int = 0
    dataset_size: int = 10000
    composition: str = "best"          # IndExp rule: basic | advanced | best
    delta: float = 1e-6
    tree: TreeConfig | None = None     # None: derived from n_sub
    agg_truncate: bool = False
    time_sort: bool = False            # include re-sorting in the timed region

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.m_values:
            raise ValueError("m_values must be nonempty")
        if any(m < 1 for m in self.m_values):
            raise ValueError("m values must be >= 1")
        if not self.datasets:
            raise ValueError("at least one dataset is required")
        if self.n_sub < 1 or self.n_sub > self.dataset_size:
            raise ValueError("need 1 <= n_sub <= dataset_size")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms {sorted(unknown)}")
        if self.composition not in ("basic", "advanced", "best"):
            raise ValueError(f"unknown composition rule {self.composition!r}")


@dataclass(frozen=True)
class ResultRow:
    dataset: str
    algorithm: str
    m: int
    trial: int
    avg_gap: float
    err_max: int
    wall_ns: int
    seed: int


def _ind_exp_rule(cfg: ExperimentConfig, m: int) -> str:
    if cfg.budget.kind != PURE_DP or cfg.composition != "best":
        return cfg.composition if cfg.composition != "best" else BASIC
    basic = ind_exp_per_call_eps(cfg.budget, m, BASIC)
    advanced = ind_exp_per_call_eps(cfg.budget, m, ADVANCED, cfg.delta)
    return ADVANCED if advanced > basic else BASIC


def _run_algorithm(cfg: ExperimentConfig, algorithm: str, sub: SortedDataset,
                   Q: QuantileRequest, rng: RandomSource) -> list[float]:
    if algorithm == ALG_AQ:
        return list(approximate_quantiles(cfg.domain, sub, Q, cfg.budget, rng).estimates)
    if algorithm == ALG_IND_EXP:
        rule = _ind_exp_rule(cfg, Q.m)
        return ind_exp(cfg.domain, sub, Q, cfg.budget, rule, rng, cfg.delta)
    if algorithm == ALG_AGG_TREE:
        tree_cfg = cfg.tree or TreeConfig.default_for(sub.n)
        tree = agg_tree_build(cfg.domain, sub, cfg.budget, tree_cfg, rng)
        return [agg_tree_quantile(tree, q, sub.n, cfg.agg_truncate)
                for q in Q.fractions]
    raise ValueError(f"unknown algorithm {algorithm!r}")


def format_row(row: ResultRow) -> str:
    return (f"{row.dataset},{row.algorithm},{row.m},{row.trial},"
            f"{row.avg_gap!r},{row.err_max},{row.wall_ns},{row.seed}")


def run_sweep(cfg: ExperimentConfig, out=None) -> list[ResultRow]:
    """Run the full (dataset x algorithm x m x trial) cross product.

    ``out`` is an optional text stream; rows are written and flushed as
    they are produced, so a crash still leaves the completed prefix on
    disk. Dataset errors propagate after the flush.
    """
    root = RandomSource(cfg.seed)
    if out is not None:
        out.write(CSV_HEADER_COMMENT + "\n")
        out.write(",".join(CSV_COLUMNS) + "\n")
        out.flush()
    rows: list[ResultRow] = []
    for ds_idx, spec in enumerate(cfg.datasets):
        base = generate(spec, cfg.dataset_size, root.fork(ds_idx).fork(0))
        for alg_idx, algorithm in enumerate(cfg.algorithms):
            for m in cfg.m_values:
                Q = QuantileRequest.uniform(m)
                for trial in range(cfg.trials):
                    # The subsample stream ignores the algorithm and the
                    # budget kind, pairing trials across both.
                    data_rng = root.fork(ds_idx).fork(1).fork(m).fork(trial)
                    sub = subsample(base, cfg.n_sub, data_rng)
                    alg_rng = root.fork(ds_idx).fork(2 + alg_idx).fork(m).fork(trial)
                    if cfg.time_sort:
                        shuffled = list(sub.points)
                        alg_rng.shuffle(shuffled)
                        t0 = time.perf_counter_ns()
                        resorted = SortedDataset(tuple(sorted(shuffled)), sub.domain)
                        V = _run_algorithm(cfg, algorithm, resorted, Q, alg_rng)
                    else:
                        t0 = time.perf_counter_ns()
                        V = _run_algorithm(cfg, algorithm, sub, Q, alg_rng)
                    wall = max(1, time.perf_counter_ns() - t0)
                    errors = rank_errors(sub, Q, V)
                    row = ResultRow(spec.name, algorithm, m, trial,
                                    sum(errors) / m, max(errors), wall,
                                    alg_rng.token)
                    rows.append(row)
                    if out is not None:
                        out.write(format_row(row) + "\n")
                        out.flush()
    return rows


def write_csv(rows: Iterable[ResultRow], out) -> None:
    out.write(CSV_HEADER_COMMENT + "\n")
    out.write(",".join(CSV_COLUMNS) + "\n")
    for row in rows:
        out.write(format_row(row) + "\n")


def read_csv(stream) -> list[ResultRow]:
    """Parse a v1 results stream back into rows."""
    first = stream.readline().strip()
    if first != CSV_HEADER_COMMENT:
        raise ValueError(f"not a dpq-results v1 file (leading line {first!r})")
    header = stream.readline().strip()
    if header != ",".join(CSV_COLUMNS):
        raise ValueError(f"unexpected column header {header!r}")
    rows = []
    for line in stream:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        ds, alg, m, trial, avg, errmax, wall, seed = line.split(",")
        rows.append(ResultRow(ds, alg, int(m), int(trial), float(avg),
                              int(errmax), int(wall), int(seed)))
    return rows


def determinism_digest(rows: Iterable[ResultRow]) -> str:
    """Digest of everything except the wall-clock column."""
    h = sha256()
    for row in rows:
        h.update(f"{row.dataset},{row.algorithm},{row.m},{row.trial},"
                 f"{row.avg_gap!r},{row.err_max},{row.seed}\n".encode())
    return h.hexdigest()


def timing_report(rows: Sequence[ResultRow]) -> list[dict]:
    """Mean and median wall time per (algorithm, m), across datasets/trials."""
    if not rows:
        raise ValueError("no rows to report on")
    groups: dict[tuple[str, int], list[int]] = {}
    for row in rows:
        groups.setdefault((row.algorithm, row.m), []).append(row.wall_ns)
    report = []
    for (algorithm, m) in sorted(groups):
        walls = groups[(algorithm, m)]
        report.append({
            "algorithm": algorithm,
            "m": m,
            "mean_ns": mean(walls),
            "median_ns": median(walls),
            "runs": len(walls),
        })
    return report


def format_timing_report(report: Sequence[dict]) -> str:
    lines = [f"{'algorithm':<10} {'m':>5} {'mean_ms':>10} {'median_ms':>10} {'runs':>6}"]
    for entry in report:
        lines.append(f"{entry['algorithm']:<10} {entry['m']:>5} "
                     f"{entry['mean_ns'] / 1e6:>10.3f} "
                     f"{entry['median_ns'] / 1e6:>10.3f} {entry['runs']:>6}")
    return "\n".join(lines)
