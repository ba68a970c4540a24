"""Recursive multi-quantile release.

Estimate the middle requested fraction with the single-quantile
mechanism, split both the data and the remaining fractions at the
released value, and recurse into the two shrunken subdomains. A data
point is consulted by exactly one subproblem per recursion level, so
the per-call budget divides by the number of levels rather than by the
number of quantiles.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Sequence

from .core import (Interval, PrivacyBudget, QuantileRequest, RandomSource,
                   SortedDataset, per_level_param, rank_target)
from .expmech import _argmax_gap, _pick_inside, _sample_gap, log_gap_widths

# Renormalized child fractions are clamped into [KAPPA, 1 - KAPPA]; equal
# requested fractions otherwise push them onto the boundary of (0, 1).
KAPPA = 1e-9


@dataclass(frozen=True)
class AqNode:
    """Diagnostics for one subproblem of the recursion tree."""

    level: int
    position: int
    interval: Interval
    normalized_q: float
    value: float


@dataclass(frozen=True)
class AqResult:
    estimates: tuple[float, ...]
    tree: tuple[AqNode, ...]
    budget_spent: PrivacyBudget


def _clamp_fraction(f: float) -> float:
    if f < KAPPA:
        return KAPPA
    if f > 1.0 - KAPPA:
        return 1.0 - KAPPA
    return f


def _node_coords(node_id: int) -> tuple[int, int]:
    # Heap numbering: root 0, children of s are 2s+1 / 2s+2.
    level = (node_id + 1).bit_length()
    return level, node_id - (1 << (level - 1)) + 2


def _split(points: Sequence[float], loggaps: Sequence[float], i0: int, i1: int,
           lo: float, hi: float, fracs: list[float], out: list[float],
           off: int, half_eps: float, rng: RandomSource, node_id: int,
           nodes: list | None, argmax: bool) -> None:
    m = len(fracs)
    if m == 0:
        return
    mid = (m + 1) // 2
    p = fracs[mid - 1]
    nw = i1 - i0

    if nw == 0:
        # Empty subproblem: the mechanism degenerates to one interval of
        # utility zero, i.e. a uniform draw. A deterministic stand-in
        # would break the per-level privacy ratio against neighbors
        # whose extra point lands in this subproblem.
        if argmax:
            v = 0.5 * (lo + hi)
        else:
            v = lo + rng.uniform() * (hi - lo)
            if v <= lo:
                v = math.nextafter(lo, hi)
            elif v >= hi:
                v = math.nextafter(hi, lo)
    elif argmax:
        _, glo, ghi = _argmax_gap(points, i0, i1, lo, hi, rank_target(p, nw))
        v = 0.5 * (glo + ghi)
    else:
        _, glo, ghi = _sample_gap(points, loggaps, i0, i1, lo, hi,
                                  rank_target(p, nw), half_eps, rng.raw.random)
        v = glo + rng.uniform() * (ghi - glo)
        if v <= lo:
            v = math.nextafter(lo, hi)
        elif v >= hi:
            v = math.nextafter(hi, lo)

    out[off + mid - 1] = v
    if nodes is not None:
        level, position = _node_coords(node_id)
        nodes.append(AqNode(level, position, Interval(lo, hi), p, v))
    if m == 1:
        return

    # Strict splits: points equal to the pivot drop out of both children.
    jl = bisect_left(points, v, i0, i1)
    jr = bisect_right(points, v, i0, i1)
    left_fracs = [_clamp_fraction(f / p) for f in fracs[:mid - 1]]
    right_fracs = [_clamp_fraction((f - p) / (1.0 - p)) for f in fracs[mid:]]
    _split(points, loggaps, i0, jl, lo, v, left_fracs, out, off,
           half_eps, rng, 2 * node_id + 1, nodes, argmax)
    _split(points, loggaps, jr, i1, v, hi, right_fracs, out, off + mid,
           half_eps, rng, 2 * node_id + 2, nodes, argmax)


def approximate_quantiles(domain: Interval, X: SortedDataset,
                          Q: QuantileRequest, budget: PrivacyBudget,
                          rng: RandomSource, *, keep_tree: bool = False,
                          argmax: bool = False) -> AqResult:
    """Release estimates for all requested fractions under ``budget``.

    Every single-quantile call runs at the per-level parameter derived
    from the full request size, so the total spend composes back to the
    configured budget exactly. Estimates come back aligned with the
    input fractions and are nondecreasing.

    All randomness comes from ``rng`` in deterministic pre-order (each
    subproblem, then its left subtree, then its right), so a fixed seed
    replays bit-identically. Callers running trials in parallel hand
    each trial its own forked source.

    ``keep_tree`` retains per-subproblem diagnostics (derived from
    published outputs only). ``argmax`` switches every pivot draw to the
    deterministic infinite-budget variant; test use only.
    """
    if X.domain != domain:
        raise ValueError("dataset domain does not match the release domain")
    eps_level = per_level_param(budget, Q.m)
    out = [0.0] * Q.m
    nodes: list | None = [] if keep_tree else None
    _split(X.points, log_gap_widths(X.points), 0, X.n, domain.lo, domain.hi,
           list(Q.fractions), out, 0, 0.5 * eps_level, rng, 0, nodes, argmax)
    return AqResult(tuple(out), tuple(nodes) if nodes else (), budget)


def sanitize(domain: Interval, X: SortedDataset, budget: PrivacyBudget,
             rng: RandomSource, *, argmax: bool = False) -> list[float]:
    """Release n surrogate points whose rank structure tracks the data's.

    Runs the recursive release on the fractions i/n, i = 1..n. The last
    fraction equals 1 and is pulled to 1 - 1/(2n), the midpoint of the
    top rank bin, to stay inside (0, 1); for n = 1 this is exactly 1/2.
    """
    n = X.n
    if n < 1:
        raise ValueError("sanitize requires a nonempty dataset")
    fracs = [i / n for i in range(1, n)]
    fracs.append(1.0 - 0.5 / n)
    result = approximate_quantiles(domain, X, QuantileRequest(tuple(fracs)),
                                   budget, rng, argmax=argmax)
    return list(result.estimates)


def rank_errors(X: SortedDataset, Q: QuantileRequest,
                V: Sequence[float]) -> list[int]:
    """Per-fraction rank misses | #{x < v_j} - floor(q_j * n) |.

    Equals the point-count distance between v_j and the true quantile
    interval for interior representatives.
    """
    if len(V) != Q.m:
        raise ValueError(f"got {len(V)} estimates for {Q.m} fractions")
    pts = X.points
    n = X.n
    return [abs(bisect_left(pts, v) - rank_target(q, n))
            for q, v in zip(Q.fractions, V)]


def err_max(X: SortedDataset, Q: QuantileRequest, V: Sequence[float]) -> int:
    """Worst rank miss across the request (maximum missed-points error)."""
    return max(rank_errors(X, Q, V))


def avg_gap(X: SortedDataset, Q: QuantileRequest, V: Sequence[float]) -> float:
    """Mean rank miss across the request; the benchmark's error metric."""
    errors = rank_errors(X, Q, V)
    return sum(errors) / len(errors)
