"""Dataset acquisition: synthetic generators, CSV ingestion, clamping
into the experiment range, and tie-breaking perturbation.

Every function returns points that satisfy the SortedDataset contract:
strictly increasing and strictly inside the clamp interval.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence, Union

from .core import Interval, RandomSource, SortedDataset


class DatasetError(ValueError):
    """Ingestion or preprocessing failure with a human-readable cause."""


@dataclass(frozen=True)
class SyntheticUniform:
    lo: float
    hi: float


@dataclass(frozen=True)
class SyntheticGaussian:
    mean: float
    sd: float


@dataclass(frozen=True)
class CsvColumn:
    path: str
    column: str


Source = Union[SyntheticUniform, SyntheticGaussian, CsvColumn]


@dataclass(frozen=True)
class DatasetSpec:
    """A named data source together with the experiment clamp range."""

    name: str
    source: Source
    clamp: Interval


def load_csv_column(path: str, column: str) -> list[float]:
    """Read one numeric column from a headered CSV file.

    Lines whose first non-blank character is '#' are comments. Parse
    failures report the 1-based line number.
    """
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DatasetError(f"cannot open {path}: {exc}") from exc
    with fh:
        header: list[str] | None = None
        col_idx = -1
        values: list[float] = []
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if header is None:
                header = [c.strip() for c in row]
                if column not in header:
                    raise DatasetError(
                        f"{path}: column {column!r} not in header {header} (line {lineno})")
                col_idx = header.index(column)
                continue
            if col_idx >= len(row):
                raise DatasetError(f"{path}: line {lineno} has {len(row)} fields, "
                                   f"column {column!r} needs {col_idx + 1}")
            cell = row[col_idx].strip()
            try:
                values.append(float(cell))
            except ValueError:
                raise DatasetError(
                    f"{path}: line {lineno}: {cell!r} is not a number") from None
        if header is None:
            raise DatasetError(f"{path}: no header row found")
    return values


def clamp_points(points: Sequence[float], domain: Interval) -> list[float]:
    """Pull points at or outside the range to the nearest interior point.

    The pull-in distance matches the perturbation scale: min(1e-6,
    width/1000), so clamped values stay clear of the open boundary.
    """
    margin = min(1e-6, domain.width() / 1000.0)
    lo = domain.lo + margin
    hi = domain.hi - margin
    return [lo if x < lo else hi if x > hi else x for x in points]


def dedup_perturb(points: Sequence[float], domain: Interval,
                  rng: RandomSource) -> SortedDataset:
    """Break ties with tiny jitter so all spacings are strictly positive.

    Already-distinct inputs pass through unchanged. Otherwise every point
    moves by less than eta = min(1e-6, smallest positive gap / 4), which
    preserves the order of originally distinct values, and an exact
    tie-break pass enforces spacing of at least eta/1000. Fails if the
    duplicates cannot be separated within those limits.
    """
    pts = sorted(float(x) for x in points)
    if not pts:
        raise DatasetError("no points to perturb")
    if not (domain.lo < pts[0] and pts[-1] < domain.hi):
        raise DatasetError(f"points must lie strictly inside ({domain.lo}, {domain.hi})")

    distinct = all(a < b for a, b in zip(pts, pts[1:]))
    if distinct:
        return SortedDataset(tuple(pts), domain)

    positive_gaps = [b - a for a, b in zip(pts, pts[1:]) if b > a]
    eta = min(1e-6, min(positive_gaps) / 4.0) if positive_gaps else 1e-6
    spacing = eta * 1e-3
    if (len(pts) + 1) * spacing >= domain.width():
        raise DatasetError(
            f"cannot separate {len(pts)} points at resolution {eta:g} "
            f"inside a domain of width {domain.width():g}")

    jittered = []
    for x in pts:
        u = rng.uniform()
        while u == 0.0:
            u = rng.uniform()
        y = x + (2.0 * u - 1.0) * eta
        # Keep jitter inside the open domain.
        if y <= domain.lo:
            y = domain.lo + spacing
        elif y >= domain.hi:
            y = domain.hi - spacing
        jittered.append(y)
    jittered.sort()

    prev = domain.lo
    for i, y in enumerate(jittered):
        if y <= prev + spacing:
            jittered[i] = y = prev + spacing
        prev = y
    if jittered[-1] >= domain.hi:
        raise DatasetError("tie-breaking pushed points past the domain edge")
    worst = max(abs(a - b) for a, b in zip(jittered, pts))
    if worst >= eta:
        raise DatasetError(
            f"tie-breaking displaced a point by {worst:g} >= eta {eta:g}; "
            f"too many duplicates for this resolution")
    return SortedDataset(tuple(jittered), domain)


def generate(spec: DatasetSpec, n: int, rng: RandomSource) -> SortedDataset:
    """Materialize n points from the source, clamped and deduplicated.

    Synthetic sources draw i.i.d. samples; CSV sources shuffle the column
    and keep the first n values.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    src = spec.source
    if isinstance(src, SyntheticUniform):
        raw = [rng.uniform_in(src.lo, src.hi) for _ in range(n)]
    elif isinstance(src, SyntheticGaussian):
        raw = [rng.gauss(src.mean, src.sd) for _ in range(n)]
    elif isinstance(src, CsvColumn):
        raw = load_csv_column(src.path, src.column)
        if len(raw) < n:
            raise DatasetError(
                f"{src.path}: needs {n} rows in column {src.column!r}, found {len(raw)}")
        rng.shuffle(raw)
        raw = raw[:n]
    else:
        raise TypeError(f"unknown source {src!r}")
    return dedup_perturb(clamp_points(raw, spec.clamp), spec.clamp, rng)


def subsample(X: SortedDataset, k: int, rng: RandomSource) -> SortedDataset:
    """Uniform without-replacement subsample of size k, re-sorted."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > X.n:
        raise ValueError(f"cannot draw {k} points from {X.n}")
    if k == X.n:
        return X
    idx = rng.sample_indices(X.n, k)
    idx.sort()
    return SortedDataset(tuple(X.points[i] for i in idx), X.domain)
