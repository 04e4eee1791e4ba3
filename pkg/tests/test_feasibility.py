import itertools

import numpy as np
import pytest

from helly_tester.errors import DimensionMismatch, EmptyTuple, StrictModeViolation
from helly_tester.feasibility import (
    Method,
    OracleConfig,
    lp_feasible,
    separation_margin,
    tuple_feasible,
)
from helly_tester.geometry import Ball, Box, Halfspace, HPolytope

from oracles import (
    grid_feasible,
    highs_margin,
    interval_feasible_1d,
    margin_linear_tuples,
    margin_mixed_tuples,
    phase1_value_1d,
)

CFG = OracleConfig()


def assert_witness(outcome, sets, tol):
    assert outcome.feasible
    for s in sets:
        assert s.contains(outcome.witness, tol)


def test_disjoint_intervals_slack_matches_1d_formula():
    rows = [((-1.0,), 0.0), ((1.0,), 1.0), ((-1.0,), -2.0), ((1.0,), 3.0)]
    out = lp_feasible(rows, 1)
    assert not out.feasible
    assert out.method is Method.EXACT_LP
    # lower bound 2 (weight 3) meets upper bound 1 (weight 2): (2-1)/(3+2)
    assert phase1_value_1d(rows) == pytest.approx(0.2)
    assert out.max_residual == pytest.approx(phase1_value_1d(rows), abs=1e-12)
    assert out.max_residual > CFG.feas_tol


def test_triangle_is_feasible():
    rows = [((-1.0, 0.0), 0.0), ((0.0, -1.0), 0.0), ((1.0, 1.0), 1.0)]
    out = lp_feasible(rows, 2)
    assert out.feasible
    for a, b in rows:
        assert np.dot(a, out.witness) <= b + 1e-9 * (1 + abs(b))


def test_lp_errors():
    with pytest.raises(EmptyTuple):
        lp_feasible([], 2)
    with pytest.raises(DimensionMismatch):
        lp_feasible([((1.0,), 0.0)], 2)


def test_dimension_zero_rows():
    assert lp_feasible([((), 1.0)], 0).feasible
    out = lp_feasible([((), 1.0), ((), -2.0)], 0)
    assert not out.feasible and out.max_residual == pytest.approx(2 / 3)


def test_phase1_value_against_1d_formula():
    rng = np.random.default_rng(3)
    for _ in range(2000):
        m = int(rng.integers(2, 8))
        rows = [((float(rng.choice([-1, 1]) * rng.uniform(0.2, 3)),), float(rng.normal() * 4)) for _ in range(m)]
        out = lp_feasible(rows, 1)
        value = out.max_residual if not out.feasible else None
        expected = phase1_value_1d(rows)
        if value is not None:
            assert value == pytest.approx(expected, rel=1e-9, abs=1e-12)
        else:
            assert expected <= CFG.feas_tol


def test_lp_matches_highs_in_higher_dimensions():
    rng = np.random.default_rng(8)
    for _ in range(300):
        d = int(rng.integers(1, 4))
        m = int(rng.integers(1, 12))
        rows = [(tuple(rng.normal(size=d)), float(rng.normal() * 2)) for _ in range(m)]
        ours = separation_margin(rows, d)
        assert ours == pytest.approx(highs_margin(rows, d), abs=1e-7)


def test_ball_examples():
    out = tuple_feasible([Ball((0, 0), 1), Ball((2, 0), 1)], 2)
    assert out.feasible and out.method is Method.PROJECTION
    np.testing.assert_allclose(out.witness, (1, 0), atol=1e-6)
    out = tuple_feasible([Ball((0, 0), 1), Ball((3, 0), 1)], 2)
    assert not out.feasible and out.certified
    assert out.max_residual > 0


def test_empty_tuple_and_mismatch():
    with pytest.raises(EmptyTuple):
        tuple_feasible([], 2)
    with pytest.raises(DimensionMismatch):
        tuple_feasible([Box((0,), (1,)), Box((0, 0), (1, 1))], 2)


def test_strict_mode_rejects_balls():
    with pytest.raises(StrictModeViolation):
        tuple_feasible([Ball((0, 0), 1)], 2, OracleConfig(strict=True))
    assert tuple_feasible([Box((0, 0), (1, 1))], 2, OracleConfig(strict=True)).feasible


def test_projection_cap_gives_uncertified_answer():
    # thin lens of two balls cut away by a halfspace
    sets = [Ball((0, 0), 1), Ball((1.999, 0), 1), Halfspace((0.3, 1), -0.02)]
    out = tuple_feasible(sets, 2, OracleConfig(proj_max_iters=1))
    assert not out.feasible and not out.certified
    out = tuple_feasible(sets, 2)
    assert not out.feasible and out.certified


def test_small_gap_is_certified_quickly():
    out = tuple_feasible([Ball((0, 0), 1), Ball((2 + 1e-5, 0), 1)], 2, OracleConfig(proj_max_iters=1))
    assert not out.feasible and out.certified


def test_linear_tuples_against_grid():
    rng = np.random.default_rng(2024)
    for sets in margin_linear_tuples(rng, 150):
        out = tuple_feasible(sets, 2)
        assert out.feasible == grid_feasible(sets)
        if out.feasible:
            assert_witness(out, sets, CFG.feas_tol)


def test_mixed_tuples_against_grid():
    rng = np.random.default_rng(77)
    tuples = margin_mixed_tuples(rng, 200)
    decisions = [grid_feasible(sets) for sets in tuples]
    assert 0 < sum(decisions) < len(decisions)
    for sets, truth in zip(tuples, decisions):
        out = tuple_feasible(sets, 2)
        assert out.feasible == truth
        if out.feasible:
            assert_witness(out, sets, CFG.proj_tol)


def _random_rows(rng, d, m):
    return [(tuple(rng.normal(size=d)), float(rng.normal() * 2)) for _ in range(m)]


def test_anti_monotone_on_nested_row_sets():
    rng = np.random.default_rng(10)
    checked = 0
    for _ in range(400):
        d = int(rng.integers(1, 4))
        small = _random_rows(rng, d, int(rng.integers(2, 7)))
        if lp_feasible(small, d).feasible:
            continue
        big = small + _random_rows(rng, d, int(rng.integers(1, 5)))
        rng.shuffle(big)
        assert not lp_feasible(big, d).feasible
        checked += 1
    assert checked > 50


def test_decision_is_permutation_invariant():
    rng = np.random.default_rng(11)
    for _ in range(200):
        d = int(rng.integers(1, 4))
        sets = []
        for _ in range(int(rng.integers(2, 5))):
            c = rng.uniform(-2, 2, size=d)
            kind = rng.integers(3)
            if kind == 0:
                sets.append(Box(c - 1, c + 1))
            elif kind == 1:
                sets.append(Ball(c, rng.uniform(0.3, 1.5)))
            else:
                a = rng.normal(size=d)
                sets.append(Halfspace(a, float(a @ c)))
        base = tuple_feasible(sets, d).feasible
        for perm in itertools.islice(itertools.permutations(sets), 6):
            assert tuple_feasible(list(perm), d).feasible == base
        for seed in (1, 2):
            assert tuple_feasible(sets, d, OracleConfig(rng_seed=seed)).feasible == base


def test_deterministic_for_fixed_seed():
    rng = np.random.default_rng(12)
    rows = _random_rows(rng, 3, 10)
    a = lp_feasible(rows, 3, OracleConfig(rng_seed=5))
    b = lp_feasible(rows, 3, OracleConfig(rng_seed=5))
    assert a.feasible == b.feasible
    if a.feasible:
        np.testing.assert_array_equal(a.witness, b.witness)
    else:
        assert a.max_residual == b.max_residual


def test_exact_path_matches_interval_oracle_1d():
    rng = np.random.default_rng(13)
    for _ in range(3000):
        sets = []
        for _ in range(int(rng.integers(1, 5))):
            if rng.random() < 0.5:
                lo = rng.uniform(-5, 5)
                sets.append(Box((lo,), (lo + rng.uniform(0, 4),)))
            else:
                a = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)
                sets.append(Halfspace((a,), rng.uniform(-5, 5)))
        assert tuple_feasible(sets, 1).feasible == interval_feasible_1d(sets)


def test_polytope_in_projection_path():
    square = HPolytope([(1, 0), (-1, 0), (0, 1), (0, -1)], [1, 0, 1, 0])
    out = tuple_feasible([square, Ball((1.5, 0.5), 0.6)], 2)
    assert_witness(out, [square, Ball((1.5, 0.5), 0.6)], 1e-7)
    out = tuple_feasible([square, Ball((2.5, 0.5), 1.0)], 2)
    assert not out.feasible and out.certified


def test_degenerate_identical_rows():
    box = Box((0, 0), (1, 1))
    assert tuple_feasible([box, box, box], 2).feasible
    touching = [Box((0, 0), (1, 1)), Box((1, 1), (2, 2))]
    out = tuple_feasible(touching, 2)
    assert out.feasible
    np.testing.assert_allclose(out.witness, (1, 1), atol=1e-9)
