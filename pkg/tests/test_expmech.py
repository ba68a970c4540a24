import math
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpq.core import Interval, RandomSource, SortedDataset, rank_target
from dpq.expmech import (brute_force_em_oracle, cell_probabilities,
                         interval_distribution, interval_weights,
                         single_quantile)


def make_X(points, lo=0.0, hi=100.0):
    return SortedDataset(tuple(float(p) for p in points), Interval(lo, hi))


def total_variation(p, q):
    return 0.5 * sum(abs(a - b) for a, b in zip(p, q))


# --- exact distribution ------------------------------------------------------

def test_distribution_matches_hand_weights():
    # five equal-width gaps, utilities {-2,-1,0,-1,-2} at q=0.5
    X = make_X([2, 4, 6, 8], lo=0.0, hi=10.0)
    dist = interval_distribution(Interval(0.0, 10.0), X, 0.5, 2.0)
    probs = [p for _, p in dist]
    z = 1.0 + 2.0 * math.exp(-1.0) + 2.0 * math.exp(-2.0)
    assert probs[2] == pytest.approx(1.0 / z, abs=1e-12)
    assert probs[0] == pytest.approx(math.exp(-2.0) / z, abs=1e-12)
    assert probs[1] == probs[3]
    assert probs[0] == probs[4]


def test_distribution_off_center_target():
    # q=0.25 over four points: one point below the target rank
    X = make_X([2, 4, 6, 8], lo=0.0, hi=10.0)
    dist = interval_distribution(Interval(0.0, 10.0), X, 0.25, 2.0)
    weights = [math.exp(-1), 1.0, math.exp(-1), math.exp(-2), math.exp(-3)]
    z = sum(weights)
    for (_, p), w in zip(dist, weights):
        assert p == pytest.approx(w / z, abs=1e-12)


def test_distribution_eps_zero_is_width_only():
    X = make_X([1, 2, 3], lo=0.0, hi=4.0)
    dist = interval_distribution(Interval(0.0, 4.0), X, 0.5, 0.0)
    assert [p for _, p in dist] == pytest.approx([0.25] * 4, abs=1e-12)


def test_single_point_distribution_follows_floor_target():
    # floor(0.5 * 1) = 0: the interval left of the point scores 0, the
    # right one scores -1, so the split is e^{eps/2} : 1, not 1/2 - 1/2.
    X = make_X([5.0], lo=0.0, hi=10.0)
    dist = interval_distribution(Interval(0.0, 10.0), X, 0.5, 3.0)
    probs = [p for _, p in dist]
    expect_left = 1.0 / (1.0 + math.exp(-1.5))
    assert probs[0] == pytest.approx(expect_left, abs=1e-12)
    assert sum(probs) == pytest.approx(1.0, abs=1e-12)


def test_distribution_sums_to_one():
    rng = RandomSource(5)
    for trial in range(25):
        n = 1 + trial % 12
        pts = sorted({round(rng.uniform_in(1.0, 99.0), 6) for _ in range(n)})
        X = make_X(pts)
        q = 0.05 + 0.9 * rng.uniform()
        eps = 0.1 + 4.0 * rng.uniform()
        probs = [p for _, p in interval_distribution(X.domain, X, q, eps)]
        assert abs(sum(probs) - 1.0) < 1e-12


def test_utilities_are_nonpositive_rank_distances():
    X = make_X([10, 20, 30], lo=0.0, hi=100.0)
    ws = interval_weights(Interval(0.0, 100.0), X, 0.7, 1.0)
    target = rank_target(0.7, 3)  # 2
    assert [w.utility for w in ws] == [-abs(k - target) for k in range(4)]
    assert all(w.utility <= 0 for w in ws)
    for w in ws:
        assert w.log_weight == pytest.approx(
            0.5 * 1.0 * w.utility + math.log(w.hi - w.lo), abs=1e-12)


# --- oracle ------------------------------------------------------------------

def test_oracle_examples():
    assert brute_force_em_oracle([0, 1], [0.0, 0.0], 1.0) == [0.5, 0.5]
    p = brute_force_em_oracle([0, 1], [0.0, -2.0], 2.0)
    z = 1 + math.exp(-2.0)
    assert p == pytest.approx([1 / z, math.exp(-2.0) / z], abs=1e-15)
    flat = brute_force_em_oracle(list(range(5)), [-3.0] * 5, 1.7)
    assert flat == pytest.approx([0.2] * 5, abs=1e-15)


def test_oracle_rejects_misaligned_inputs():
    with pytest.raises(ValueError):
        brute_force_em_oracle([0, 1], [0.0], 1.0)


@given(st.lists(st.floats(-10.0, 0.0), min_size=2, max_size=10),
       st.floats(0.1, 3.0), st.floats(-5.0, 5.0))
def test_oracle_shift_invariance(utilities, eps, shift):
    base = brute_force_em_oracle(range(len(utilities)), utilities, eps)
    shifted = brute_force_em_oracle(range(len(utilities)),
                                    [u + shift for u in utilities], eps)
    assert total_variation(base, shifted) < 1e-12


def test_distribution_matches_oracle_with_width_folded_in():
    # Fold ln(width) into the utility so the plain softmax oracle
    # reproduces the width-weighted interval distribution exactly.
    rng = RandomSource(17)
    for trial in range(50):
        n = 1 + trial % 9
        pts = sorted({round(rng.uniform_in(1.0, 99.0), 5) for _ in range(n)})
        X = make_X(pts)
        q = 0.05 + 0.9 * rng.uniform()
        eps = 0.2 + 3.0 * rng.uniform()
        dist = interval_distribution(X.domain, X, q, eps)
        folded = [w.utility + (2.0 / eps) * math.log(w.hi - w.lo) for w, _ in dist]
        oracle = brute_force_em_oracle([w.index for w, _ in dist], folded, eps)
        assert total_variation([p for _, p in dist], oracle) <= 1e-12


# --- properties of the distribution -------------------------------------------

def test_shift_invariance_of_interval_distribution():
    # Moving the request so every utility shifts by a constant must not
    # change anything; verify via explicit reweighting instead.
    X = make_X([10, 20, 30, 40], lo=0.0, hi=50.0)
    dist = interval_distribution(X.domain, X, 0.5, 1.3)
    # recompute probabilities from shifted log-weights
    shifted = [(w, math.exp(w.log_weight + 7.0)) for w, _ in dist]
    z = sum(s for _, s in shifted)
    for (w, p), (_, s) in zip(dist, shifted):
        assert p == pytest.approx(s / z, rel=1e-12)


def test_monotonicity_better_and_wider_wins():
    rng = RandomSource(23)
    for trial in range(30):
        n = 2 + trial % 8
        pts = sorted({round(rng.uniform_in(1.0, 99.0), 5) for _ in range(n)})
        X = make_X(pts)
        dist = interval_distribution(X.domain, X, 0.5, 1.0)
        items = [(w.utility, w.hi - w.lo, p) for w, p in dist]
        for ua, wa, pa in items:
            for ub, wb, pb in items:
                if ua >= ub and wa >= wb:
                    assert pa >= pb - 1e-12


# --- sampling ------------------------------------------------------------------

def test_sampling_frequencies_match_distribution():
    X = make_X([10, 30, 35, 80], lo=0.0, hi=100.0)
    domain = X.domain
    dist = interval_distribution(domain, X, 0.4, 1.5)
    edges = [domain.lo, *X.points, domain.hi]
    rng = RandomSource(99)
    n_draws = 20000
    counts = Counter()
    for _ in range(n_draws):
        v = single_quantile(domain, X, 0.4, 1.5, rng)
        k = sum(1 for e in edges[1:-1] if e <= v)
        counts[k] += 1
    tol = 4.0 / math.sqrt(n_draws)
    for idx, (_, p) in enumerate(dist):
        assert abs(counts[idx] / n_draws - p) <= tol


def test_single_quantile_stays_inside_domain():
    X = make_X([1.0], lo=0.0, hi=2.0)
    rng = RandomSource(1)
    for _ in range(500):
        v = single_quantile(Interval(0.0, 2.0), X, 0.5, 0.5, rng)
        assert 0.0 < v < 2.0


def test_empty_data_is_uniform_over_domain():
    # one interval with utility zero: the release is a uniform draw, so
    # the privacy ratio against one-point neighbors stays bounded
    X = SortedDataset((), Interval(2.0, 6.0))
    rng = RandomSource(0)
    draws = [single_quantile(Interval(2.0, 6.0), X, 0.3, 1.0, rng)
             for _ in range(4000)]
    assert all(2.0 < v < 6.0 for v in draws)
    assert abs(sum(draws) / len(draws) - 4.0) < 0.1
    left = sum(1 for v in draws if v < 4.0) / len(draws)
    assert abs(left - 0.5) < 0.05
    replay = single_quantile(Interval(2.0, 6.0), X, 0.3, 1.0, RandomSource(0))
    assert replay == draws[0]


def test_empty_data_neighbor_ratio_bounded():
    domain = Interval(0.0, 8.0)
    edges = list(range(9))
    eps = 1.0
    empty = SortedDataset((), domain)
    one = SortedDataset((3.3,), domain)
    p0 = cell_probabilities(domain, empty, 0.5, eps, edges)
    p1 = cell_probabilities(domain, one, 0.5, eps, edges)
    for a, b in zip(p0, p1):
        assert abs(math.log(a) - math.log(b)) <= eps + 1e-9


def test_argmax_mode_picks_best_interval_midpoint():
    X = make_X([2, 4, 6, 8], lo=0.0, hi=10.0)
    # target rank 2 -> interval (4, 6), midpoint 5
    v = single_quantile(Interval(0.0, 10.0), X, 0.5, 1.0, RandomSource(0), argmax=True)
    assert v == 5.0


def test_argmax_breaks_utility_ties_by_width():
    X = make_X([2.0], lo=0.0, hi=10.0)
    # floor(0.9*1)=0: utilities 0 and -1; left interval (0,2) wins on utility
    v = single_quantile(Interval(0.0, 10.0), X, 0.9, 1.0, RandomSource(0), argmax=True)
    assert v == 1.0


def test_rejects_bad_fraction_and_eps():
    X = make_X([5.0], lo=0.0, hi=10.0)
    with pytest.raises(ValueError):
        single_quantile(Interval(0.0, 10.0), X, 0.0, 1.0, RandomSource(0))
    with pytest.raises(ValueError):
        single_quantile(Interval(0.0, 10.0), X, 0.5, -1.0, RandomSource(0))


# --- tail bound (small-scale; the full criterion lives in the acceptance suite)

def test_tail_bound_small():
    X = make_X(range(1, 100), lo=0.0, hi=100.0)  # psi = 100
    assert X.psi() == 100.0
    domain = X.domain
    eps = 1.0
    rng = RandomSource(12)
    runs = 2000
    target = rank_target(0.5, X.n)
    for beta in (0.5, 0.1):
        threshold = 2.0 * (math.log(X.psi()) - math.log(beta)) / eps
        bad = 0
        for _ in range(runs):
            v = single_quantile(domain, X, 0.5, eps, rng)
            if abs(X.count_below(v) - target) > threshold:
                bad += 1
        assert bad / runs <= beta


# --- exact DP check (small-scale) ------------------------------------------------

def test_neighbor_log_ratio_bounded():
    domain = Interval(0.0, 8.0)
    edges = [j for j in range(9)]  # 8 unit cells
    base = (1.5, 3.0, 5.5)
    eps = 1.0
    X = SortedDataset(base, domain)
    for extra in (0.7, 2.2, 4.4, 7.1):
        Xp = SortedDataset(tuple(sorted(base + (extra,))), domain)
        for q in (0.25, 0.5, 0.85):
            p = cell_probabilities(domain, X, q, eps, edges)
            pp = cell_probabilities(domain, Xp, q, eps, edges)
            for a, b in zip(p, pp):
                assert abs(math.log(a) - math.log(b)) <= eps + 1e-9


def test_cell_probabilities_sum_to_one_and_cover():
    domain = Interval(0.0, 10.0)
    X = make_X([2, 5, 8], lo=0.0, hi=10.0)
    edges = [0.0, 1.0, 2.5, 6.0, 10.0]
    probs = cell_probabilities(domain, X, 0.5, 2.0, edges)
    assert sum(probs) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        cell_probabilities(domain, X, 0.5, 2.0, [0.0, 5.0])  # does not cover
