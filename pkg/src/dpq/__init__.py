"""Differentially private quantile estimation.

Recursive multi-quantile release built on an exponential-mechanism
single-quantile subroutine, with pure-DP and zCDP budgeting, baseline
algorithms, dataset handling, and a benchmark harness.
"""

from .aq import (AqNode, AqResult, approximate_quantiles, avg_gap, err_max,
                 rank_errors, sanitize)
from .baselines import (NoisyTree, TreeConfig, agg_tree_build,
                        agg_tree_quantile, exact_tree_counts, ind_exp,
                        ind_exp_per_call_eps, joint_exp_distribution,
                        joint_exp_oracle, joint_utility, tree_noise_scale)
from .bench import (ExperimentConfig, ResultRow, default_datasets,
                    determinism_digest, read_csv, run_sweep, timing_report,
                    write_csv)
from .core import (Interval, PrivacyBudget, QuantileRequest, RandomSource,
                   SortedDataset, depth, gap, per_level_param, rank_target,
                   true_quantile)
from .data import (CsvColumn, DatasetError, DatasetSpec, SyntheticGaussian,
                   SyntheticUniform, dedup_perturb, generate, load_csv_column,
                   subsample)
from .expmech import (IntervalWeight, brute_force_em_oracle,
                      cell_probabilities, interval_distribution,
                      single_quantile)

__version__ = "0.1.0"
