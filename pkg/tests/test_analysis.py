import math

import numpy as np
import pytest

from helly_tester.analysis import (
    count_intersecting_tuples,
    depth_bruteforce,
    fractional_bound,
    helly_check,
    verify_corollary,
)
from helly_tester.errors import EnumerationTooLarge, ParamOutOfRange
from helly_tester.generators import gen_calibrated_1d, gen_pairwise_disjoint, gen_random_linear
from helly_tester.geometry import Ball, Box, Instance

from oracles import pairwise_overlaps_1d, stabbing_depth_1d


def intervals(pairs):
    return Instance(1, [Box((a,), (b,)) for a, b in pairs])


def test_three_interval_example():
    inst = intervals([(0, 2), (1, 3), (2.5, 4)])
    census = count_intersecting_tuples(inst, 2)
    assert (census.total, census.intersecting) == (3, 2)
    assert census.fraction == pytest.approx(2 / 3)
    depth = depth_bruteforce(inst)
    assert depth.depth == 2
    assert len(depth.witness_subset) == 2


def test_disjoint_census_and_depth():
    inst = gen_pairwise_disjoint(12, 2, 0)
    assert count_intersecting_tuples(inst, 3).intersecting == 0
    assert depth_bruteforce(inst).depth == 1


def test_identical_sets_have_full_depth():
    inst = Instance(2, [Ball((0, 0), 1)] * 9)
    assert depth_bruteforce(inst).depth == 9
    assert count_intersecting_tuples(inst, 3).fraction == 1.0


def test_random_1d_against_sweep():
    rng = np.random.default_rng(4)
    for _ in range(60):
        n = int(rng.integers(3, 12))
        lo = rng.uniform(-5, 5, n)
        pairs = list(zip(lo, lo + rng.uniform(0.1, 3, n)))
        inst = intervals(pairs)
        assert count_intersecting_tuples(inst, 2).intersecting == pairwise_overlaps_1d(pairs)
        assert depth_bruteforce(inst).depth == stabbing_depth_1d(pairs)


def test_depth_witness_intersects():
    inst = gen_random_linear(10, 2, 3)
    res = depth_bruteforce(inst)
    assert res.depth == len(res.witness_subset)
    witness = Instance(2, inst.subfamily(res.witness_subset))
    assert count_intersecting_tuples(witness, res.depth).intersecting == 1


def test_depth_limits():
    with pytest.raises(EnumerationTooLarge):
        depth_bruteforce(gen_pairwise_disjoint(25, 1, 0))
    assert depth_bruteforce(gen_pairwise_disjoint(25, 1, 0), max_n=None).depth == 1
    with pytest.raises(EnumerationTooLarge):
        depth_bruteforce(gen_calibrated_1d(16, 8, 0), budget=10)


def test_census_cap_and_range():
    inst = gen_pairwise_disjoint(30, 1, 0)
    with pytest.raises(EnumerationTooLarge):
        count_intersecting_tuples(inst, 15, cap=1000)
    with pytest.raises(ParamOutOfRange):
        count_intersecting_tuples(inst, 31)


def test_fractional_bound_examples():
    assert fractional_bound(0.5, 2, 1) == pytest.approx(0.25)
    assert fractional_bound(1.0, 3, 2) == pytest.approx(1 / 3)
    for d in range(1, 5):
        assert fractional_bound(1.0, d + 1, d) == pytest.approx(1 / (d + 1))
    beta = fractional_bound(0.2, 4, 2)
    assert beta == pytest.approx(math.sqrt(0.2 / 6))
    assert beta**2 * 6 == pytest.approx(0.2)
    with pytest.raises(ParamOutOfRange):
        fractional_bound(0.5, 2, 2)
    with pytest.raises(ParamOutOfRange):
        fractional_bound(0.0, 3, 1)


def test_census_monotone_in_q():
    inst = gen_calibrated_1d(10, 5, 2)
    fractions = [count_intersecting_tuples(inst, q).fraction for q in range(1, 7)]
    assert all(a >= b for a, b in zip(fractions, fractions[1:]))
    assert fractions[5] == 0.0


def test_census_consistent_with_depth():
    rng = np.random.default_rng(6)
    for seed in range(10):
        inst = gen_random_linear(int(rng.integers(5, 10)), 2, seed)
        depth = depth_bruteforce(inst).depth
        for q in range(1, inst.n + 1):
            hits = count_intersecting_tuples(inst, q).intersecting
            assert (hits > 0) == (q <= depth)


def test_verify_corollary_examples():
    report = verify_corollary(gen_calibrated_1d(20, 2, 0), 0.5)
    assert report.hypothesis and report.conclusion and report.holds
    assert report.census.intersecting == 1
    report = verify_corollary(gen_calibrated_1d(10, 8, 0), 0.9)
    assert not report.hypothesis and report.holds
    assert report.census.intersecting == 28


def test_helly_check_consistent():
    for seed in range(10):
        for d in (1, 2):
            assert helly_check(gen_random_linear(7, d, seed)).consistent
    assert helly_check(gen_calibrated_1d(6, 6, 0)).whole_family_feasible
