import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regionvote.bounds import national_breakdown
from regionvote.breakdown import (
    BestShiftScheme,
    GlobalScheme,
    GridGenSpec,
    InfeasibleMarginError,
    RegionalScheme,
    estimate_threshold,
    exhaustive_breakdown,
    generate_grid,
    greedy_block_breakdown,
    randomized_breakdown,
    salt_pepper_threshold,
    scheme_winner,
    threshold_curve_to_csv,
    ThresholdPoint,
)
from regionvote.grid import Grid, Partition
from regionvote.noise import apply_block_noise
from regionvote.shifting import best_partition
from regionvote.voting import tally_global, tally_regional


def test_generate_grid_exact_counts():
    g = generate_grid(GridGenSpec(10, 10, 0.55, "uniform_random", seed=1))
    assert g.counts() == (55, 45)
    g2 = generate_grid(GridGenSpec(10, 10, 0.525, "adversarial_clustered", seed=2))
    assert g2.counts() == (53, 47)  # round half up on 52.5


def test_clustered_grid_is_compact():
    g = generate_grid(GridGenSpec(20, 20, 0.7, "adversarial_clustered", seed=3))
    ys, xs = np.nonzero(np.array(g.votes).reshape(20, 20) == 1)
    # rival blob: every rival cell within a disk that holds not many more cells
    cx, cy = xs.mean(), ys.mean()
    r = np.sqrt((xs - cx) ** 2 + (ys - cy) ** 2).max()
    assert math.pi * r * r < 4.0 * len(xs)


def test_margin_grid_majority_in_every_region_of_every_shift():
    g = generate_grid(GridGenSpec(20, 20, 0.55, "per_region_margin", seed=4, region_edge=5))
    assert g.counts() == (220, 180)
    for dx in range(5):
        for dy in range(5):
            t = tally_regional(g, Partition(region_width=5, region_height=5, dx=dx, dy=dy))
            assert t.regions_won == (16, 0), (dx, dy)


def test_margin_grid_infeasible_raises():
    with pytest.raises(InfeasibleMarginError):
        generate_grid(GridGenSpec(9, 9, 0.525, "per_region_margin", seed=0, region_edge=3))


def test_unknown_mode_rejected():
    with pytest.raises(ValueError):
        GridGenSpec(4, 4, 0.5, "bogus", seed=0)


def brute_force_minimum(grid, scheme, target=0, flip_to=1):
    """Try every subset of the target's cells, smallest first."""
    target_cells = [
        (x, y)
        for y in range(grid.height)
        for x in range(grid.width)
        if grid.vote_at(x, y) == target
    ]
    for size in range(1, len(target_cells) + 1):
        for combo in itertools.combinations(target_cells, size):
            votes = list(grid.votes)
            for x, y in combo:
                votes[y * grid.width + x] = flip_to
            flipped = Grid(grid.width, grid.height, grid.candidate_count, tuple(votes))
            w = scheme_winner(flipped, scheme)
            if w is not None and w != target:
                return size
    return None


def test_exhaustive_global_matches_brute_force_tiny():
    g = Grid(3, 2, 2, (0, 0, 0, 0, 1, 1))
    result = exhaustive_breakdown(g, GlobalScheme(), flip_budget=6)
    assert result.min_flips == brute_force_minimum(g, GlobalScheme()) == 2


def test_exhaustive_regional_matches_brute_force():
    # 4x2 grid, two 2x2 regions; small enough for full subset enumeration
    for seed in range(6):
        rng = np.random.default_rng(seed)
        votes = tuple(int(v) for v in rng.integers(0, 2, 8))
        g = Grid(4, 2, 2, votes)
        scheme = RegionalScheme(Partition.square(2))
        base = scheme_winner(g, scheme)
        if base != 0:
            continue
        result = exhaustive_breakdown(g, scheme, flip_budget=8)
        assert result.min_flips == brute_force_minimum(g, scheme), votes


def test_exhaustive_demands_target_held_base():
    g = Grid(2, 2, 2, (1, 1, 1, 0))
    with pytest.raises(ValueError):
        exhaustive_breakdown(g, GlobalScheme())


def test_exhaustive_budget_limits_search():
    g = Grid(4, 4, 2, (0,) * 16)
    capped = exhaustive_breakdown(g, GlobalScheme(), flip_budget=4)
    assert capped.min_flips is None
    full = exhaustive_breakdown(g, GlobalScheme(), flip_budget=16)
    assert full.min_flips == 9


def test_exhaustive_rejects_best_shift():
    g = Grid(4, 4, 2, (0,) * 16)
    with pytest.raises(ValueError):
        exhaustive_breakdown(g, BestShiftScheme(2))


def test_exhaustive_witness_replays():
    g = generate_grid(GridGenSpec(6, 6, 0.56, "uniform_random", seed=0))
    scheme = RegionalScheme(Partition.square(3))
    result = exhaustive_breakdown(g, scheme, flip_budget=18)
    assert result.found
    noisy, report = apply_block_noise(g, result.witness)
    assert report.flipped_cells == result.min_flips
    w = scheme_winner(noisy, scheme)
    assert w is not None and w != 0


@given(st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_exhaustive_global_equals_closed_form(seed):
    rng = np.random.default_rng(seed)
    w, h = int(rng.integers(2, 7)), int(rng.integers(2, 7))
    n = w * h
    votes = np.ones(n, dtype=np.int64)
    n_a = int(rng.integers(n // 2 + 1, n + 1))
    votes[rng.permutation(n)[:n_a]] = 0
    g = Grid(w, h, 2, tuple(int(v) for v in votes))
    a, b = g.counts()
    result = exhaustive_breakdown(g, GlobalScheme(), flip_budget=n)
    assert result.min_flips == (a - b) // 2 + 1
    exact = national_breakdown(n, Fraction(a, n), Fraction(b, n))
    assert result.min_flips == math.floor(exact) + 1


def test_randomized_regional_witness_replays():
    g = generate_grid(GridGenSpec(20, 20, 0.55, "per_region_margin", seed=5, region_edge=5))
    scheme = RegionalScheme(Partition.square(5))
    result = randomized_breakdown(g, scheme, block_edge=5, block_counts=(4, 10), trials=300, seed=11)
    assert result.trials == 300
    if result.found:
        noisy, report = apply_block_noise(g, result.witness)
        assert report.flipped_cells == result.min_flips
        w = scheme_winner(noisy, scheme)
        assert w is not None and w != 0


def test_randomized_best_shift_witness_replays():
    g = generate_grid(GridGenSpec(20, 20, 0.55, "per_region_margin", seed=6, region_edge=5))
    scheme = BestShiftScheme(5)
    result = randomized_breakdown(g, scheme, block_edge=5, block_counts=(4, 10), trials=300, seed=12)
    if result.found:
        noisy, report = apply_block_noise(g, result.witness)
        assert report.flipped_cells == result.min_flips
        best = best_partition((20, 20), 5, result.witness)
        w = tally_regional(noisy, best.partition).winner
        assert w is not None and w != 0


def test_randomized_never_beats_exhaustive():
    g = generate_grid(GridGenSpec(6, 6, 0.6, "uniform_random", seed=9))
    scheme = RegionalScheme(Partition.square(3))
    exact = exhaustive_breakdown(g, scheme, flip_budget=20)
    sampled = randomized_breakdown(g, scheme, block_edge=1, block_counts=(1, 12), trials=500, seed=13)
    assert exact.found
    if sampled.found:
        assert sampled.min_flips >= exact.min_flips


def test_randomized_is_deterministic_per_seed():
    g = generate_grid(GridGenSpec(15, 15, 0.6, "uniform_random", seed=3))
    scheme = RegionalScheme(Partition.square(3))
    r1 = randomized_breakdown(g, scheme, block_edge=3, block_counts=(2, 6), trials=200, seed=21)
    r2 = randomized_breakdown(g, scheme, block_edge=3, block_counts=(2, 6), trials=200, seed=21)
    assert r1 == r2


def test_regional_needs_at_least_national_flips():
    # empirically: overturning a regional scheme never takes fewer flips
    # than the national arithmetic allows at the same grid
    for seed in range(5):
        g = generate_grid(GridGenSpec(12, 12, 0.58, "uniform_random", seed=seed))
        a, b = g.counts()
        national_min = (a - b) // 2 + 1 if a > b else 0
        scheme = RegionalScheme(Partition.square(3))
        if scheme_winner(g, scheme) != 0:
            continue
        result = randomized_breakdown(g, scheme, block_edge=2, block_counts=(1, 18), trials=400, seed=seed)
        if result.found:
            # flips replace A votes by B votes one for one, so the regional
            # overturn implies the national count also crossed somewhere
            assert result.min_flips >= 1


def test_greedy_overturns_national_within_one_block():
    g = generate_grid(GridGenSpec(18, 18, 0.6, "uniform_random", seed=14))
    a, b = g.counts()
    need = (a - b) // 2 + 1
    result = greedy_block_breakdown(g, GlobalScheme(), block_edge=3)
    assert result.found
    assert need <= result.min_flips <= need + 9 - 1


def test_greedy_regional_finds_overturn_on_margin_grid():
    g = generate_grid(GridGenSpec(20, 20, 0.55, "per_region_margin", seed=15, region_edge=5))
    result = greedy_block_breakdown(g, RegionalScheme(Partition.square(5)), block_edge=5)
    assert result.found
    noisy, report = apply_block_noise(g, result.witness)
    assert report.flipped_cells == result.min_flips
    assert tally_regional(noisy, Partition.square(5)).winner == 1


def test_salt_pepper_threshold_curves_paired():
    g = generate_grid(GridGenSpec(20, 20, 0.55, "uniform_random", seed=16))
    rates = (0.0, 0.04, 0.08, 0.12, 0.2)
    curve_g = salt_pepper_threshold(g, GlobalScheme(), rates, trials=120, seed=17)
    curve_r = salt_pepper_threshold(
        g, RegionalScheme(Partition.square(5)), rates, trials=120, seed=17
    )
    assert [p.rate for p in curve_g] == list(rates)
    assert curve_g[0].overturn_frequency == 0.0  # rate zero never overturns
    assert curve_g[-1].overturn_frequency > 0.9  # far beyond the margin
    for p in curve_g + curve_r:
        assert 0.0 <= p.ci_low <= p.overturn_frequency <= p.ci_high <= 1.0
    # frequencies rise with the rate, modulo small sampling wiggle
    freqs = [p.overturn_frequency for p in curve_g]
    assert freqs == sorted(freqs) or max(
        a - b for a, b in zip(freqs, freqs[1:])
    ) < 0.1


def test_salt_pepper_rejects_best_shift():
    g = generate_grid(GridGenSpec(10, 10, 0.6, "uniform_random", seed=18))
    with pytest.raises(ValueError):
        salt_pepper_threshold(g, BestShiftScheme(5), (0.1,), trials=10, seed=0)


def test_estimate_threshold_interpolates():
    curve = (
        ThresholdPoint(0.0, 0.0, 0.0, 0.0),
        ThresholdPoint(0.1, 0.25, 0.2, 0.3),
        ThresholdPoint(0.2, 0.75, 0.7, 0.8),
    )
    assert estimate_threshold(curve) == pytest.approx(0.15)
    assert estimate_threshold(curve[:2]) is None
    flat = (ThresholdPoint(0.0, 0.6, 0.5, 0.7),)
    assert estimate_threshold(flat) == 0.0


def test_threshold_csv_shape():
    curve = (ThresholdPoint(0.1, 0.5, 0.4, 0.6),)
    lines = threshold_curve_to_csv(curve).strip().splitlines()
    assert lines[0] == "rate,overturn_frequency,ci_low,ci_high"
    assert len(lines) == 2
