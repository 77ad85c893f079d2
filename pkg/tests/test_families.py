"""Test random function families: determinism and hypotheses by construction."""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from core.calculus import Monotonicity, first_moment, is_midpoint_concave, is_midpoint_convex, profile
from core.expr import Interval, affine_coefficients
from core.families import (
    UNIT,
    Family,
    FamilySpec,
    anchor,
    build,
    generate,
    perturb,
    random_interval,
    sample,
    step_scale,
)

GRID = np.linspace(0.0, 1.0, 65)
SEEDS = range(8)
WIDE_SEEDS = range(40)


def test_generate_is_deterministic_per_seed():
    spec = FamilySpec(Family.SMOOTH_GENERAL, seed=42)
    np.testing.assert_array_equal(generate(spec).evaluate(GRID), generate(spec).evaluate(GRID))


def test_different_seeds_differ():
    a = sample(FamilySpec(Family.CONVEX_POSITIVE_DERIV, seed=1))
    b = sample(FamilySpec(Family.CONVEX_POSITIVE_DERIV, seed=2))
    assert a.coefficients != b.coefficients


class TestHypothesesByConstruction:
    @pytest.mark.parametrize("seed", WIDE_SEEDS)
    def test_convex_positive_deriv(self, seed):
        f = generate(FamilySpec(Family.CONVEX_POSITIVE_DERIV, degree=3, seed=seed))
        p = profile(f, UNIT)
        assert p.convex
        assert p.deriv_abs_convex
        assert p.monotone == Monotonicity.INCREASING

    @pytest.mark.parametrize("seed", SEEDS)
    def test_convex_piecewise_linear(self, seed):
        f = generate(FamilySpec(Family.CONVEX_PIECEWISE_LINEAR, degree=4, seed=seed))
        assert is_midpoint_convex(f.evaluate, GRID)

    @pytest.mark.parametrize("seed", WIDE_SEEDS)
    def test_concave(self, seed):
        f = generate(FamilySpec(Family.CONCAVE, seed=seed))
        assert is_midpoint_concave(f.evaluate, GRID)
        assert profile(f, UNIT).concave

    @pytest.mark.parametrize("seed", WIDE_SEEDS)
    def test_symmetric_convex_has_zero_moment(self, seed):
        f = generate(FamilySpec(Family.SYMMETRIC_CONVEX, seed=seed))
        assert profile(f, UNIT).convex
        assert first_moment(f, UNIT) == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize(
        "family,verdict",
        [
            (Family.CONVEX_POSITIVE_DERIV, "convex"),
            (Family.CONVEX_PIECEWISE_LINEAR, "convex"),
            (Family.SYMMETRIC_CONVEX, "convex"),
            (Family.CONCAVE, "concave"),
        ],
    )
    def test_declared_class_survives_rescaling(self, family, verdict):
        rng = np.random.default_rng(17)
        for seed in range(10):
            iv = random_interval(rng, (-2.0, 2.0), (0.5, 3.0))
            f = build(sample(FamilySpec(family, seed=seed)), iv)
            assert getattr(profile(f, iv), verdict), (family, seed, iv)

    @pytest.mark.parametrize("degree", [1, 2, 5])
    def test_step_function_jump_count(self, degree):
        params = sample(FamilySpec(Family.STEP_FUNCTION, degree=degree, seed=3))
        assert len(params.knots) == degree
        assert len(params.coefficients) == degree + 1
        assert list(params.knots) == sorted(params.knots)
        assert profile(build(params), UNIT).has_jumps

    def test_linear(self):
        f = generate(FamilySpec(Family.LINEAR, seed=5))
        assert affine_coefficients(f) is not None


class TestBuild:
    def test_moves_member_onto_interval(self):
        params = sample(FamilySpec(Family.SMOOTH_GENERAL, seed=9))
        iv = Interval(2.0, 5.0)
        on_unit, moved = build(params), build(params, iv)
        assert moved.evaluate(2.0) == pytest.approx(on_unit.evaluate(0.0), abs=1e-12)
        assert moved.evaluate(3.5) == pytest.approx(on_unit.evaluate(0.5), abs=1e-12)
        assert moved.evaluate(5.0) == pytest.approx(on_unit.evaluate(1.0), abs=1e-12)

    def test_step_guards_match_interval(self):
        params = anchor(FamilySpec(Family.STEP_FUNCTION, degree=1))
        f = build(params, Interval(-1.0, 3.0))
        assert [g.a for g, _ in f.pieces] == [-1.0, pytest.approx(1.0)]
        assert f.evaluate(0.0) == -1.0
        assert f.evaluate(2.0) == 1.0


class TestAnchor:
    def test_convex_anchor(self):
        f = build(anchor(FamilySpec(Family.CONVEX_POSITIVE_DERIV, degree=2)))
        np.testing.assert_allclose(f.evaluate(GRID), GRID, atol=1e-15)

    def test_step_anchor(self):
        params = anchor(FamilySpec(Family.STEP_FUNCTION, degree=1))
        assert params.knots == (0.5,)
        assert params.coefficients == (-1.0, 1.0)

    def test_smooth_anchor_is_identity(self):
        f = build(anchor(FamilySpec(Family.SMOOTH_GENERAL, degree=3)))
        np.testing.assert_allclose(f.evaluate(GRID), GRID, atol=1e-15)

    def test_zero_range_gives_zero_member(self):
        spec = FamilySpec(Family.LINEAR, coefficient_range=(0.0, 0.0))
        assert all(c == 0.0 for c in anchor(spec).coefficients)
        assert build(anchor(spec)).evaluate(0.7) == 0.0


class TestPerturb:
    @pytest.mark.parametrize("family", [Family.CONVEX_POSITIVE_DERIV, Family.CONVEX_PIECEWISE_LINEAR, Family.CONCAVE])
    def test_keeps_sign_constraints(self, family):
        rng = np.random.default_rng(0)
        params = anchor(FamilySpec(family, degree=3))
        for _ in range(50):
            params = perturb(params, rng, 1.0)
        start = 1 if family != Family.CONVEX_PIECEWISE_LINEAR else 2
        assert all(c >= 0 for c in params.coefficients[start:])
        assert all(0.01 <= t <= 0.99 for t in params.knots)

    def test_smooth_frequency_stays_positive(self):
        rng = np.random.default_rng(1)
        params = anchor(FamilySpec(Family.SMOOTH_GENERAL))
        for _ in range(50):
            params = perturb(params, rng, 2.0)
            assert params.coefficients[-2] >= 0.1

    def test_step_knots_stay_sorted(self):
        rng = np.random.default_rng(2)
        params = sample(FamilySpec(Family.STEP_FUNCTION, degree=4, seed=2))
        for _ in range(50):
            params = perturb(params, rng, 1.0)
            assert list(params.knots) == sorted(params.knots)

    @pytest.mark.parametrize(
        "family,check",
        [
            (Family.CONVEX_POSITIVE_DERIV, is_midpoint_convex),
            (Family.SYMMETRIC_CONVEX, is_midpoint_convex),
            (Family.CONCAVE, is_midpoint_concave),
        ],
    )
    def test_member_stays_in_class(self, family, check):
        rng = np.random.default_rng(3)
        params = sample(FamilySpec(family, seed=3))
        for _ in range(30):
            params = perturb(params, rng, 0.5)
            assert check(build(params).evaluate, GRID)


@pytest.mark.parametrize("coefficient_range,expected", [((0.0, 3.0), 1.0), ((-6.0, 0.0), 2.0), ((0.0, 0.0), 0.0)])
def test_step_scale(coefficient_range, expected):
    assert step_scale(FamilySpec(Family.LINEAR, coefficient_range=coefficient_range)) == expected


def test_random_interval_ranges():
    rng = np.random.default_rng(7)
    for _ in range(20):
        iv = random_interval(rng, (-2.0, 2.0), (0.5, 3.0))
        assert -2.0 <= iv.a <= 2.0
        assert 0.5 <= iv.length <= 3.0 + 1e-12
