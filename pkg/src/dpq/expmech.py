"""Single-quantile release via the exponential mechanism.

The n+1 gaps between consecutive data points (domain edges acting as
sentinels) partition the domain into intervals of constant utility
-|rank - floor(q*n)|. An interval is sampled with probability
proportional to exp(eps * utility / 2) * width, then the release is a
uniform point inside it. Sampling uses the Gumbel-max race on log
weights, so large eps*utility products never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import Interval, RandomSource, SortedDataset, rank_target

_NEG_INF = float("-inf")


@dataclass(frozen=True)
class IntervalWeight:
    """One inter-point interval with its utility and log weight.

    ``index`` is 1-based over the n+1 gaps; ``utility`` is the negative
    rank distance of the interval (0 for intervals containing a true
    quantile); ``log_weight`` = eps/2 * utility + ln(width).
    """

    index: int
    lo: float
    hi: float
    utility: int
    log_weight: float


def log_gap_widths(points: Sequence[float]) -> list[float]:
    """ln of the spacing between consecutive points.

    Precomputed once per dataset and shared by every window of the
    recursion; only the two edge gaps of a window change with its domain.
    """
    log = math.log
    return [log(points[i + 1] - points[i]) for i in range(len(points) - 1)]


def interval_weights(domain: Interval, X: SortedDataset, q: float,
                     eps: float) -> list[IntervalWeight]:
    n = X.n
    target = rank_target(q, n)
    half_eps = 0.5 * eps
    edges = (domain.lo, *X.points, domain.hi)
    out = []
    for k in range(1, n + 2):
        lo, hi = edges[k - 1], edges[k]
        u = -abs((k - 1) - target)
        out.append(IntervalWeight(k, lo, hi, u, half_eps * u + math.log(hi - lo)))
    return out


def interval_distribution(domain: Interval, X: SortedDataset, q: float,
                          eps: float) -> list[tuple[IntervalWeight, float]]:
    """Exact normalized interval probabilities, computed in log space."""
    ws = interval_weights(domain, X, q, eps)
    top = max(w.log_weight for w in ws)
    raw = [math.exp(w.log_weight - top) for w in ws]
    z = sum(raw)
    return [(w, r / z) for w, r in zip(ws, raw)]


def brute_force_em_oracle(grid: Sequence[float], utilities: Sequence[float],
                          eps: float) -> list[float]:
    """Direct softmax exp(eps*u/2)/Z over a finite candidate set.

    Test oracle with unit sensitivity and no log-space tricks, so
    callers keep eps*u within floating range. ``grid`` only pins the
    candidate/utility alignment.
    """
    if len(grid) != len(utilities):
        raise ValueError(f"grid and utilities disagree: {len(grid)} vs {len(utilities)}")
    weights = [math.exp(0.5 * eps * u) for u in utilities]
    z = sum(weights)
    return [w / z for w in weights]


def _sample_gap(points: Sequence[float], loggaps: Sequence[float],
                i0: int, i1: int, lo: float, hi: float,
                target: int, half_eps: float, rand) -> tuple[int, float, float]:
    """Gumbel-max draw of one gap index for the window points[i0:i1].

    Returns (k, gap_lo, gap_hi) with k in [0, i1-i0]. Hot path: plain
    float arithmetic, one uniform and two logs per gap.
    """
    log = math.log
    nw = i1 - i0
    best = _NEG_INF
    best_k = 0
    best_lo = lo
    best_hi = hi
    prev = lo
    for k in range(nw + 1):
        if k < nw:
            cur = points[i0 + k]
            lw = loggaps[i0 + k - 1] if k > 0 else log(cur - prev)
        else:
            cur = hi
            lw = log(cur - prev)
        u = rand()
        while u <= 0.0:
            u = rand()
        d = k - target
        if d < 0:
            d = -d
        s = lw - half_eps * d - log(-log(u))
        if s > best:
            best = s
            best_k = k
            best_lo = prev
            best_hi = cur
        prev = cur
    return best_k, best_lo, best_hi


def _argmax_gap(points: Sequence[float], i0: int, i1: int, lo: float,
                hi: float, target: int) -> tuple[int, float, float]:
    """Deterministic infinite-budget limit: best utility, then widest gap.

    Test-only companion of _sample_gap; excluded from the private surface.
    """
    nw = i1 - i0
    best_key = (-(1 << 60), 0.0)
    best = (0, lo, hi)
    prev = lo
    for k in range(nw + 1):
        cur = points[i0 + k] if k < nw else hi
        key = (-abs(k - target), cur - prev)
        if key > best_key:
            best_key = key
            best = (k, prev, cur)
        prev = cur
    return best


def _pick_inside(glo: float, ghi: float, u: float, domain: Interval) -> float:
    """Uniform point in [glo, ghi), nudged strictly inside the domain."""
    v = glo + u * (ghi - glo)
    if v <= domain.lo:
        v = math.nextafter(domain.lo, domain.hi)
    elif v >= domain.hi:
        v = math.nextafter(domain.hi, domain.lo)
    return v


def single_quantile(domain: Interval, X: SortedDataset, q: float, eps: float,
                    rng: RandomSource, *, argmax: bool = False) -> float:
    """eps-DP estimate of the q-th quantile of X inside ``domain``.

    Samples one of the n+1 inter-point intervals with probability
    proportional to exp(eps*utility/2)*width, then a uniform point from
    the selected half-open interval. With no data there is a single
    interval of utility zero, so the release is uniform over the domain;
    a deterministic fallback would break the privacy ratio against
    one-point neighbors.

    With ``argmax`` set, takes the lexicographically best (utility,
    width) interval and returns its midpoint: the deterministic
    eps -> infinity limit used by noiseless tests only.
    """
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    if eps < 0.0:
        raise ValueError(f"eps must be nonnegative, got {eps}")
    n = X.n
    if n == 0:
        if argmax:
            return domain.midpoint()
        return _pick_inside(domain.lo, domain.hi, rng.uniform(), domain)
    target = rank_target(q, n)
    if argmax:
        _, glo, ghi = _argmax_gap(X.points, 0, n, domain.lo, domain.hi, target)
        return 0.5 * (glo + ghi)
    loggaps = log_gap_widths(X.points)
    _, glo, ghi = _sample_gap(X.points, loggaps, 0, n, domain.lo, domain.hi,
                              target, 0.5 * eps, rng.raw.random)
    return _pick_inside(glo, ghi, rng.uniform(), domain)


def cell_probabilities(domain: Interval, X: SortedDataset, q: float,
                       eps: float, cell_edges: Sequence[float]) -> list[float]:
    """Exact probability of the release landing in each grid cell.

    The output density is uniform inside every inter-point interval, so
    each cell's mass is a sum of overlap fractions. ``cell_edges`` must
    be increasing and cover the domain.
    """
    if len(cell_edges) < 2:
        raise ValueError("need at least two cell edges")
    if any(b <= a for a, b in zip(cell_edges, cell_edges[1:])):
        raise ValueError("cell edges must be strictly increasing")
    if cell_edges[0] > domain.lo or cell_edges[-1] < domain.hi:
        raise ValueError("cell edges must cover the domain")
    if X.n == 0:
        # Single interval of utility zero: uniform over the domain.
        inv = 1.0 / domain.width()
        out = []
        for j in range(len(cell_edges) - 1):
            overlap = min(domain.hi, cell_edges[j + 1]) - max(domain.lo, cell_edges[j])
            out.append(max(overlap, 0.0) * inv)
        return out
    dist = interval_distribution(domain, X, q, eps)
    out = [0.0] * (len(cell_edges) - 1)
    for w, p in dist:
        inv_width = 1.0 / (w.hi - w.lo)
        for j in range(len(out)):
            overlap = min(w.hi, cell_edges[j + 1]) - max(w.lo, cell_edges[j])
            if overlap > 0.0:
                out[j] += p * overlap * inv_width
    return out
