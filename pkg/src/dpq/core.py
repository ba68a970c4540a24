"""Shared domain types: intervals, sorted samples, quantile requests,
privacy budgets, and seedable randomness.

Everything here is immutable after construction and safe to share across
threads; RandomSource instances are single-owner but can be forked into
independent child streams.
"""

from __future__ import annotations

import hashlib
import math
import random
from bisect import bisect_left
from dataclasses import dataclass
from typing import Iterable, Sequence

PURE_DP = "pure"
ZCDP = "zcdp"


@dataclass(frozen=True)
class Interval:
    """Open interval (lo, hi) on the real line."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError(f"interval endpoints must be finite, got ({self.lo}, {self.hi})")
        if not self.lo < self.hi:
            raise ValueError(f"interval requires lo < hi, got ({self.lo}, {self.hi})")

    def width(self) -> float:
        return self.hi - self.lo

    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo < x < self.hi


@dataclass(frozen=True)
class SortedDataset:
    """Strictly increasing sample points, all strictly inside ``domain``.

    Duplicate-free input is a hard precondition of every mechanism built
    on top of this type; ``data.dedup_perturb`` enforces it upstream for
    raw data.
    """

    points: tuple[float, ...]
    domain: Interval

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        pts = self.points
        lo, hi = self.domain.lo, self.domain.hi
        prev = lo
        for i, x in enumerate(pts):
            if not prev < x:
                raise ValueError(f"points must be strictly increasing and inside the domain "
                                 f"(violation at index {i}: {prev} !< {x})")
            prev = x
        if pts and not pts[-1] < hi:
            raise ValueError(f"last point {pts[-1]} is not strictly below {hi}")

    @property
    def n(self) -> int:
        return len(self.points)

    def min_gap(self) -> float:
        """Smallest spacing between consecutive points, counting the domain
        endpoints as sentinel points."""
        edges = (self.domain.lo, *self.points, self.domain.hi)
        return min(b - a for a, b in zip(edges, edges[1:]))

    def psi(self) -> float:
        """Domain width divided by the minimum spacing; the data-resolution
        figure that drives the single-quantile error bound."""
        return self.domain.width() / self.min_gap()

    def count_below(self, v: float) -> int:
        """Number of points strictly below ``v``."""
        return bisect_left(self.points, v)


@dataclass(frozen=True)
class QuantileRequest:
    """Nondecreasing quantile fractions, each strictly inside (0, 1)."""

    fractions: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "fractions", tuple(self.fractions))
        if not self.fractions:
            raise ValueError("at least one quantile fraction is required")
        prev = 0.0
        for q in self.fractions:
            if not 0.0 < q < 1.0:
                raise ValueError(f"fractions must lie strictly inside (0, 1), got {q}")
            if q < prev:
                raise ValueError(f"fractions must be nondecreasing, got {q} after {prev}")
            prev = q

    @property
    def m(self) -> int:
        return len(self.fractions)

    @classmethod
    def uniform(cls, m: int) -> "QuantileRequest":
        """The m equally spaced fractions i/(m+1), i = 1..m."""
        if m < 1:
            raise ValueError("m must be >= 1")
        return cls(tuple(i / (m + 1) for i in range(1, m + 1)))


@dataclass(frozen=True)
class PrivacyBudget:
    """Total privacy budget: epsilon under pure DP or rho under zCDP."""

    kind: str
    value: float

    def __post_init__(self) -> None:
        if self.kind not in (PURE_DP, ZCDP):
            raise ValueError(f"unknown budget kind {self.kind!r}")
        if not self.value > 0.0:
            raise ValueError(f"budget value must be positive, got {self.value}")

    @classmethod
    def pure(cls, eps: float) -> "PrivacyBudget":
        return cls(PURE_DP, eps)

    @classmethod
    def zcdp(cls, rho: float) -> "PrivacyBudget":
        return cls(ZCDP, rho)

    def per_level(self, m: int) -> float:
        return per_level_param(self, m)


def depth(m: int) -> int:
    """Recursion depth of balanced halving over m quantiles.

    Splitting m requests at the middle leaves ceil(m/2)-1 and floor(m/2)
    requests, so the depth recurrence is d(m) = 1 + d(floor(m/2)), i.e.
    floor(log2 m) + 1, which is exactly ``m.bit_length()``.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return m.bit_length()


def per_level_param(budget: PrivacyBudget, m: int) -> float:
    """Per-level epsilon handed to each single-quantile call.

    Only one subproblem per recursion level touches any given point, so
    the budget divides across levels: eps/depth for pure DP, and
    sqrt(2*rho/depth) for zCDP (each level's eps-DP release costs
    eps^2/2 of zCDP budget).
    """
    d = depth(m)
    if budget.kind == PURE_DP:
        return budget.value / d
    return math.sqrt(2.0 * budget.value / d)


def rank_target(q: float, n: int) -> int:
    """floor(q*n): the number of points that should sit below a q-quantile.

    Every rank computation in the package funnels through here so that
    mechanisms and error metrics agree bit-for-bit on the target.
    """
    return int(math.floor(q * n))


def gap(X: SortedDataset, d1: float, d2: float) -> int:
    """Number of data points in [min(d1,d2), max(d1,d2)).

    Half-open on the right: a point equal to the larger argument is not
    counted, one equal to the smaller argument is.
    """
    if d2 < d1:
        d1, d2 = d2, d1
    pts = X.points
    return bisect_left(pts, d2) - bisect_left(pts, d1)


def true_quantile(X: SortedDataset, q: float) -> Interval:
    """The maximal open interval of valid q-quantile representatives.

    With k = floor(q*n), any point strictly between the k-th and
    (k+1)-th order statistics (domain endpoints as sentinels) has
    exactly k data points below it.
    """
    if X.n == 0:
        raise ValueError("true_quantile requires a nonempty dataset")
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    k = rank_target(q, X.n)
    lo = X.points[k - 1] if k >= 1 else X.domain.lo
    hi = X.points[k] if k < X.n else X.domain.hi
    return Interval(lo, hi)


def _stream_token(seed: int, path: tuple[int, ...]) -> int:
    label = f"{seed}:" + "/".join(map(str, path))
    digest = hashlib.sha256(label.encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


class RandomSource:
    """Seedable uniform-[0,1) stream with deterministic forking.

    Same (seed, path) always reproduces the identical draw sequence.
    ``fork(i)`` derives an independent child stream; tree-shaped
    computations label the children of stream s as 2s+1 and 2s+2 so that
    results do not depend on traversal or scheduling order.
    """

    __slots__ = ("seed", "path", "token", "_rng")

    def __init__(self, seed: int, path: tuple[int, ...] = ()):
        self.seed = int(seed)
        self.path = tuple(path)
        self.token = _stream_token(self.seed, self.path)
        self._rng = random.Random(self.token)

    def fork(self, index: int) -> "RandomSource":
        return RandomSource(self.seed, self.path + (int(index),))

    def uniform(self) -> float:
        return self._rng.random()

    def uniforms(self, k: int) -> list[float]:
        r = self._rng.random
        return [r() for _ in range(k)]

    def uniform_in(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self._rng.random()

    def gumbel(self) -> float:
        r = self._rng.random()
        while r <= 0.0:
            r = self._rng.random()
        return -math.log(-math.log(r))

    def laplace(self, scale: float) -> float:
        u = self._rng.random() - 0.5
        while u <= -0.5:
            u = self._rng.random() - 0.5
        if u < 0.0:
            return scale * math.log(1.0 + 2.0 * u)
        return -scale * math.log(1.0 - 2.0 * u)

    def gauss(self, mu: float, sigma: float) -> float:
        return self._rng.gauss(mu, sigma)

    def shuffle(self, items: list) -> None:
        self._rng.shuffle(items)

    def sample_indices(self, n: int, k: int) -> list[int]:
        return self._rng.sample(range(n), k)

    # Raw access for hot loops that cannot afford a method call per draw.
    @property
    def raw(self) -> random.Random:
        return self._rng
