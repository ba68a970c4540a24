"""Comparison algorithms for the benchmark.

IndExp runs the single-quantile mechanism once per requested fraction
under composition. AggTree builds a Laplace-noised hierarchical
histogram and reads quantiles off the noisy leaf counts. The joint
mechanism that samples all m estimates at once is provided only as an
exhaustive-enumeration oracle for tiny instances.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Sequence

from .core import (PURE_DP, Interval, PrivacyBudget, QuantileRequest,
                   RandomSource, SortedDataset, rank_target)
from .expmech import _pick_inside, _sample_gap, log_gap_widths

BASIC = "basic"
ADVANCED = "advanced"

# Fallback release when noise starves the whole leaf scan: just inside
# the right domain edge, offset by this fraction of the width.
_EDGE_KAPPA = 1e-9


def ind_exp_per_call_eps(budget: PrivacyBudget, m: int,
                         composition: str = BASIC, delta: float = 1e-6) -> float:
    """Per-call epsilon for m independent single-quantile releases.

    basic: eps/m. advanced: eps / (2*sqrt(2*m*ln(1/delta))), the standard
    advanced-composition inverse with the slack factor folded in, giving
    an (eps, delta) guarantee overall. zCDP budgets compose additively,
    so each call gets sqrt(2*rho/m) regardless of ``composition``.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if budget.kind != PURE_DP:
        return math.sqrt(2.0 * budget.value / m)
    if composition == BASIC:
        return budget.value / m
    if composition == ADVANCED:
        if not 0.0 < delta < 1.0:
            raise ValueError(f"advanced composition needs delta in (0, 1), got {delta}")
        return budget.value / (2.0 * math.sqrt(2.0 * m * math.log(1.0 / delta)))
    raise ValueError(f"unknown composition rule {composition!r}")


def ind_exp(domain: Interval, X: SortedDataset, Q: QuantileRequest,
            budget: PrivacyBudget, composition: str, rng: RandomSource,
            delta: float = 1e-6) -> list[float]:
    """One independent single-quantile release per requested fraction.

    Outputs are sorted ascending before returning, which only helps this
    baseline when estimates land out of order.
    """
    if X.domain != domain:
        raise ValueError("dataset domain does not match the release domain")
    eps = ind_exp_per_call_eps(budget, Q.m, composition, delta)
    n = X.n
    if n == 0:
        return sorted(_pick_inside(domain.lo, domain.hi, rng.uniform(), domain)
                      for _ in range(Q.m))
    pts = X.points
    loggaps = log_gap_widths(pts)
    half_eps = 0.5 * eps
    rand = rng.raw.random
    out = []
    for q in Q.fractions:
        _, glo, ghi = _sample_gap(pts, loggaps, 0, n, domain.lo, domain.hi,
                                  rank_target(q, n), half_eps, rand)
        out.append(_pick_inside(glo, ghi, rng.uniform(), domain))
    out.sort()
    return out


@dataclass(frozen=True)
class TreeConfig:
    """Shape of the histogram tree: ``branching ** height`` equal-width leaves."""

    branching: int = 2
    height: int = 10

    def __post_init__(self) -> None:
        if self.branching < 2:
            raise ValueError(f"branching must be >= 2, got {self.branching}")
        if self.height < 1:
            raise ValueError(f"height must be >= 1, got {self.height}")

    @property
    def leaf_count(self) -> int:
        return self.branching ** self.height

    def cell_edges(self, domain: Interval) -> list[float]:
        b = self.leaf_count
        w = domain.width()
        return [domain.lo + j * w / b for j in range(b + 1)]

    @classmethod
    def default_for(cls, n: int) -> "TreeConfig":
        return cls(branching=2, height=max(4, math.ceil(math.log2(max(n, 16)))))


@dataclass
class NoisyTree:
    """Per-node noisy counts, root level first, leaves last.

    Only pre-noise counts satisfy parent = sum(children); the noisy
    values are unconstrained reals and may go negative.
    """

    levels: list[list[float]]
    config: TreeConfig
    domain: Interval

    @property
    def leaves(self) -> list[float]:
        return self.levels[-1]


def exact_tree_counts(domain: Interval, X: SortedDataset,
                      cfg: TreeConfig) -> list[list[int]]:
    """Noise-free counts for every tree level, root first."""
    edges = cfg.cell_edges(domain)
    leaves = [0] * cfg.leaf_count
    for x in X.points:
        leaves[bisect_right(edges, x) - 1] += 1
    levels = [leaves]
    b = cfg.branching
    level = leaves
    while len(level) > 1:
        parent = []
        for j in range(0, len(level), b):
            acc = 0
            for c in level[j:j + b]:
                acc += c
            parent.append(acc)
        levels.append(parent)
        level = parent
    levels.reverse()
    return levels


def tree_noise_scale(budget: PrivacyBudget, cfg: TreeConfig) -> float:
    """Laplace scale per node: height/eps for pure DP; for zCDP each node
    runs at eps' = sqrt(2*rho/height), i.e. scale 1/eps'."""
    if budget.kind == PURE_DP:
        return cfg.height / budget.value
    return math.sqrt(cfg.height / (2.0 * budget.value))


def agg_tree_build(domain: Interval, X: SortedDataset, budget: PrivacyBudget,
                   cfg: TreeConfig, rng: RandomSource) -> NoisyTree:
    """Exact per-level counts plus independent Laplace noise on every node."""
    if X.domain != domain:
        raise ValueError("dataset domain does not match the release domain")
    scale = tree_noise_scale(budget, cfg)
    noisy = [[c + rng.laplace(scale) for c in level]
             for level in exact_tree_counts(domain, X, cfg)]
    return NoisyTree(noisy, cfg, domain)


def agg_tree_quantile(tree: NoisyTree, q: float, n_hint: int,
                      truncate: bool = False) -> float:
    """Read one quantile off the noisy leaf counts.

    Scans leaves left to right until the running noisy total reaches
    q * n_hint, then interpolates linearly inside the winning cell. The
    in-cell position is clamped to [0, 1]; if noise keeps the total
    below the target everywhere, returns just inside the right edge.
    ``truncate`` clips negative leaf counts to zero before scanning.
    """
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    target = q * n_hint
    edges = tree.config.cell_edges(tree.domain)
    acc = 0.0
    for z, c in enumerate(tree.leaves):
        if truncate and c < 0.0:
            c = 0.0
        acc += c
        if acc >= target:
            below = acc - c
            p = (target - below) / c if c > 0.0 else 1.0
            if p < 0.0:
                p = 0.0
            elif p > 1.0:
                p = 1.0
            return (1.0 - p) * edges[z] + p * edges[z + 1]
    return tree.domain.hi - _EDGE_KAPPA * tree.domain.width()


def joint_utility(X: SortedDataset, Q: QuantileRequest,
                  V: Sequence[float]) -> int:
    """Joint score of a candidate tuple: negative total mismatch between
    consecutive-rank spacings of the targets and of the candidates.

    Sentinels pin both ends: rank 0 at the left domain edge and rank n
    at the right one.
    """
    if len(V) != Q.m:
        raise ValueError(f"got {len(V)} candidates for {Q.m} fractions")
    pts = X.points
    n = X.n
    targets = [0] + [rank_target(q, n) for q in Q.fractions] + [n]
    counts = [0] + [bisect_left(pts, v) for v in V] + [n]
    total = 0
    for j in range(1, len(targets)):
        total += abs((targets[j] - targets[j - 1]) - (counts[j] - counts[j - 1]))
    return -total


def joint_exp_distribution(domain_grid: Sequence[float], X: SortedDataset,
                           Q: QuantileRequest, eps: float
                           ) -> tuple[list[tuple[float, ...]], list[float]]:
    """Exact joint-mechanism distribution over nondecreasing grid tuples.

    Weights are exp(eps * u / 4): sensitivity 2 of the joint score under
    the usual exp(eps*u/(2*sens)) normalization. Refuses instances with
    more than 10^6 raw tuples.
    """
    g = len(domain_grid)
    m = Q.m
    if g < 1:
        raise ValueError("grid must be nonempty")
    if g ** m > 1_000_000:
        raise ValueError(f"grid^m = {g}^{m} exceeds the 10^6 enumeration cap")
    tuples = [t for t in itertools.combinations_with_replacement(sorted(domain_grid), m)]
    log_weights = [0.25 * eps * joint_utility(X, Q, t) for t in tuples]
    top = max(log_weights)
    raw = [math.exp(lw - top) for lw in log_weights]
    z = sum(raw)
    return tuples, [r / z for r in raw]


def joint_exp_oracle(domain_grid: Sequence[float], X: SortedDataset,
                     Q: QuantileRequest, eps: float,
                     rng: RandomSource) -> list[float]:
    """Sample one tuple from the exact joint-mechanism distribution."""
    tuples, probs = joint_exp_distribution(domain_grid, X, Q, eps)
    r = rng.uniform()
    acc = 0.0
    for t, p in zip(tuples, probs):
        acc += p
        if r < acc:
            return list(t)
    return list(tuples[-1])
