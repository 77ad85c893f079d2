"""Test the bound catalog against closed forms, witnesses and counterexamples."""

import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent.parent))

from core.bounds import (
    KernelIJ,
    TheoremId,
    atkinson_bound,
    atkinson_check,
    barnett_mean_bound,
    catalog,
    cerone_dragomir_mean_bound,
    cheb_first,
    cheb_second_sign,
    concave_pair_lower,
    convex_pair_upper,
    h_constant,
    hwang_dragomir_bound,
    hwang_kernels,
    hwang_kernels_displayed,
    lupas_lower,
    mn_pair,
    remark1_bound,
    remark2_bound,
    resolve_theorems,
    thm21_bound,
    thm22_bound,
    thm23_bound,
    thm24_bound,
    thm25_bound,
)
from core.calculus import chebyshev_T, profile
from core.expr import ArgumentError, Interval, affine_map, compose, differentiate
from core.parser import parse
from core.verdict import Direction, Status

UNIT = Interval(0.0, 1.0)
STEP = "piecewise{[0,0.5]: -1; [0.5,1]: 1}"


def P(text):
    return parse(text)


def statuses(result, case_id="case", advisory=()):
    return {v.case_id.split("/", 1)[1]: v.status for v in result.verdicts(case_id, advisory)}


class TestClassical:
    def test_cheb_first_equality(self):
        fp, gp = profile(P("x"), UNIT), profile(P("x"), UNIT)
        result = cheb_first(fp, gp, UNIT)
        assert result.value == pytest.approx(1 / 12)
        assert result.applicable

    def test_cheb_first_loose(self):
        result = cheb_first(profile(P("x^2/6"), UNIT), profile(P("x"), UNIT), UNIT)
        assert result.value == pytest.approx(1 / 36)

    def test_cheb_first_constant(self):
        result = cheb_first(profile(P("5"), UNIT), profile(P("x"), UNIT), UNIT)
        assert result.value == 0.0

    def test_cheb_first_needs_measured_for_verdicts(self):
        result = cheb_first(profile(P("x"), UNIT), profile(P("x"), UNIT), UNIT)
        with pytest.raises(ArgumentError):
            result.verdicts("cheb1")

    def test_sign_same_sense(self):
        v = cheb_second_sign(profile(P("x"), UNIT), profile(P("x"), UNIT), 1 / 12)
        assert v.direction == Direction.GE
        assert v.status == Status.HOLDS

    def test_sign_opposite_sense(self):
        T = chebyshev_T(P("x"), P("1-x"), UNIT)
        v = cheb_second_sign(profile(P("x"), UNIT), profile(P("1-x"), UNIT), T)
        assert v.direction == Direction.LE
        assert v.status == Status.HOLDS

    def test_sign_not_monotone(self):
        v = cheb_second_sign(profile(P("abs(x-0.5)"), UNIT), profile(P("x"), UNIT), 0.0)
        assert v.status == Status.NOT_MET


class TestMeanDifference:
    def test_barnett_equality(self):
        result = barnett_mean_bound(profile(P("x"), UNIT), UNIT, Interval(0.0, 0.5))
        assert result.value == pytest.approx(0.25)
        assert result.secondary_value == pytest.approx(0.25)

    def test_barnett_centered_inner(self):
        result = barnett_mean_bound(profile(P("3*x"), UNIT), UNIT, Interval(0.25, 0.75))
        assert result.value == pytest.approx(0.25 * 0.5 * 3)

    def test_barnett_same_length_rejected(self):
        with pytest.raises(ArgumentError):
            barnett_mean_bound(profile(P("x"), UNIT), UNIT, UNIT)

    def test_cerone_branches(self):
        bv, lip = cerone_dragomir_mean_bound(profile(P("x"), UNIT), UNIT, Interval(0.0, 0.5))
        assert bv.theorem_id == TheoremId.CERONE_BV
        assert lip.theorem_id == TheoremId.CERONE_LIP
        assert bv.value == pytest.approx(0.5)
        assert lip.value == pytest.approx(0.25)

    def test_cerone_step_has_no_lipschitz_branch(self):
        bv, lip = cerone_dragomir_mean_bound(profile(P(STEP), UNIT), UNIT, Interval(0.0, 0.5))
        assert bv.applicable
        assert not lip.applicable

    def test_cerone_constant(self):
        bv, lip = cerone_dragomir_mean_bound(profile(P("2"), UNIT), UNIT, Interval(0.1, 0.4))
        assert bv.value == 0.0
        assert lip.value == 0.0


class TestHwangKernels:
    def test_exact_at_left_endpoint(self):
        iv = Interval(Fraction(0), Fraction(1))
        kernel = hwang_kernels(iv, Fraction(0), Fraction(1, 3))
        assert kernel == KernelIJ(Fraction(1, 27), Fraction(2, 9))

    @pytest.mark.parametrize("t", [Fraction(1, 4), Fraction(1, 2), Fraction(5, 7)])
    def test_left_endpoint_closed_form(self, t):
        a, b = Fraction(-1), Fraction(2)
        kernel = hwang_kernels(Interval(a, b), a, t)
        assert kernel.I == (t - a) * (b - t) / (6 * (b - a))
        assert kernel.J == (b - t) / 3

    def test_mirror_symmetry(self):
        iv = Interval(Fraction(0), Fraction(1))
        left = hwang_kernels(iv, Fraction(1, 5), Fraction(1, 2))
        right = hwang_kernels(iv, Fraction(1, 2), Fraction(4, 5))
        assert left.I == right.J
        assert left.J == right.I

    def test_displayed_pair_duplicates_I(self):
        kernel = hwang_kernels_displayed(UNIT, 0.0, 0.3)
        assert kernel.I == kernel.J

    @pytest.mark.parametrize("t", [Fraction(1, 4), Fraction(1, 2), Fraction(5, 7)])
    def test_displayed_pair_too_small_for_identity(self, t):
        # f = x on [0, 1], x = 0, y = t: the mean difference is (1-t)/2
        iv = Interval(Fraction(0), Fraction(1))
        tail = (1 - t) ** 2 / 6
        mirrored = hwang_kernels(iv, Fraction(0), t)
        printed = hwang_kernels_displayed(iv, Fraction(0), t)
        assert mirrored.I + mirrored.J + tail == (1 - t) / 2
        assert printed.I + printed.J + tail < (1 - t) / 2

    def test_degenerate(self):
        with pytest.raises(ArgumentError):
            hwang_kernels(UNIT, 0.0, 1.0)
        with pytest.raises(ArgumentError):
            hwang_kernels(UNIT, 0.6, 0.4)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(min_value=0.0, max_value=0.45), st.floats(min_value=0.55, max_value=0.99))
    def test_bound_holds_for_convex_derivative(self, x, y):
        for text in ("x", "x^2", "exp(2*x)", "(x-0.5)^2"):
            result = hwang_dragomir_bound(P(text), UNIT, x, y)
            assert result.applicable
            assert abs(result.measured) <= result.value + 1e-9

    def test_constant_function(self):
        result = hwang_dragomir_bound(P("4"), UNIT, 0.2, 0.7)
        assert result.value == 0.0
        assert result.measured == pytest.approx(0.0, abs=1e-12)


class TestEndpointBounds:
    def test_mn_pair(self):
        mn = mn_pair(profile(P("x^2/6"), UNIT), profile(P("x"), UNIT))
        assert mn.M == pytest.approx(1 / 3)
        assert mn.N == pytest.approx(1 / 3)
        mn = mn_pair(profile(P("x"), UNIT), profile(P("x"), UNIT))
        assert (mn.M, mn.N) == (pytest.approx(2.0), pytest.approx(2.0))

    def test_mn_pair_missing_derivative(self):
        assert mn_pair(profile(P(STEP), UNIT), profile(P("x"), UNIT)) is None

    def test_thm21_witnesses(self):
        result = thm21_bound(P("x^2/6"), P("x"), UNIT)
        assert result.value == pytest.approx(1 / 72)
        assert result.measured == pytest.approx(1 / 72)
        assert result.secondary_value == pytest.approx(1 / 36)
        result = thm21_bound(P("x"), P("x"), UNIT)
        assert result.value == pytest.approx(1 / 12)
        assert result.secondary_value == pytest.approx(1 / 12)
        assert set(statuses(result).values()) == {Status.HOLDS}

    def test_thm21_not_met(self):
        result = thm21_bound(P("x^3 - x"), P("x"), Interval(-1.0, 1.0))
        assert not result.applicable
        assert [v.status for v in result.verdicts("thm21")] == [Status.NOT_MET]

    def test_thm22_witnesses(self):
        result = thm22_bound(P("x"), P("x^2/3"), UNIT)
        assert result.value == pytest.approx(1 / 36)
        assert result.measured == pytest.approx(1 / 36)
        assert result.secondary_value == pytest.approx(1 / 18)

    def test_thm22_explicit_lipschitz(self):
        result = thm22_bound(P("x"), P("x"), UNIT, lipschitz=2.0)
        assert result.value == pytest.approx(2 / 12)

    def test_remark1(self):
        result = remark1_bound(P("sin(x)"), P("x^2"), UNIT)
        assert result.value == pytest.approx(1 / 24 * 1.0 * 2.0)
        assert statuses(result)["level1"] == Status.HOLDS

    def test_thm23_witnesses(self):
        result = thm23_bound(P(STEP), P("x^2/2"), UNIT)
        assert result.value == pytest.approx(1 / 8)
        assert result.measured == pytest.approx(1 / 8)
        result = thm23_bound(P(STEP), P("x"), UNIT)
        assert result.secondary_value == pytest.approx(1 / 4)
        assert result.measured == pytest.approx(1 / 4)

    def test_thm23_first_level_counterexample(self):
        result = thm23_bound(P("sgn(x - 1/sqrt(3))"), P("x^2/2"), UNIT)
        assert result.measured == pytest.approx(2 / (9 * math.sqrt(3)))
        levels = statuses(result)
        assert levels["level1"] == Status.VIOLATED
        assert levels["level2"] == Status.HOLDS
        advisory = [v for v in result.verdicts("thm23", ("level1",)) if v.status == Status.VIOLATED]
        assert advisory and not any(v.failed for v in advisory)

    def test_thm23_constant(self):
        result = thm23_bound(P("1"), P("x^2"), UNIT)
        assert result.value == 0.0

    def test_remark2(self):
        result = remark2_bound(P("x"), P("x"), UNIT)
        assert result.value == pytest.approx(1 / 8)
        assert not remark2_bound(P(STEP), P("x"), UNIT).applicable

    def test_thm25_witness(self):
        result = thm25_bound(P("x"), P("x"), UNIT)
        assert result.value == pytest.approx(1 / 12)

    def test_thm25_constant_g(self):
        assert thm25_bound(P("x^2"), P("7"), UNIT).value == 0.0


class TestScalingAndKernelConsistency:
    @pytest.mark.parametrize("lam", [0.5, 2.0, 3.7])
    def test_thm21_prefactor_scales_quadratically(self, lam):
        base = thm21_bound(P("x"), P("x"), UNIT)
        wide = thm21_bound(P("x"), P("x"), Interval(0.0, lam))
        assert wide.value == pytest.approx(lam**2 * base.value, rel=1e-12)
        assert wide.measured == pytest.approx(lam**2 * base.measured, rel=1e-9)

    @pytest.mark.parametrize("lam", [0.5, 2.0, 3.7])
    def test_thm21_invariant_under_dilation_of_precomposed_pair(self, lam):
        iv = Interval(-0.5, 1.0)
        dilated = Interval(iv.a, iv.a + lam * iv.length)
        f, g = P("exp(x)"), P("x^2 + x")
        pull = affine_map(iv, dilated)
        base = thm21_bound(f, g, iv)
        moved = thm21_bound(compose(f, pull), compose(g, pull), dilated)
        assert base.applicable and moved.applicable
        assert moved.value == pytest.approx(base.value, rel=1e-9)
        assert moved.measured == pytest.approx(base.measured, rel=1e-8)

    def test_hwang_at_left_endpoint_matches_three_term_form(self):
        rng = np.random.default_rng(2024)
        texts = ["exp(x)", "x^2", "(x-0.3)^2", "x^3 + 3*x"]
        for i in range(20):
            a = float(rng.uniform(-2.0, 1.0))
            b = a + float(rng.uniform(0.5, 3.0))
            length = b - a
            t = float(rng.uniform(a + 0.05 * length, b - 0.05 * length))
            f = P(texts[i % len(texts)])
            d = differentiate(f)
            fa, ft, fb = (abs(float(d.evaluate(s))) for s in (a, t, b))

            result = hwang_dragomir_bound(f, Interval(a, b), a, t)
            expected = ((t - a) * (b - t) / length * fa + 2 * (b - t) * ft + (b - t) ** 2 / length * fb) / 6
            assert result.value == pytest.approx(expected, rel=1e-10, abs=1e-12)

            # |f'(t)| under its chord gives the two-endpoint form
            chord = (
                ((t - a) * (b - t) + 2 * (b - t) ** 2) / length * fa
                + (2 * (b - t) * (t - a) + (b - t) ** 2) / length * fb
            ) / 6
            assert abs(result.measured) <= result.value + 1e-9 <= chord + 2e-9


class TestHConstant:
    def test_beta_one(self):
        assert h_constant(1.0) == pytest.approx(1 / 12, rel=1e-13)

    def test_beta_two(self):
        assert h_constant(2.0) == pytest.approx(1 / (2 * math.sqrt(30)), abs=1e-12)

    def test_beta_infinite(self):
        assert h_constant(math.inf) == 0.125

    def test_monotone_and_bracketed_on_grid(self):
        grid = [1.01, 1.1, 1.5, 2, 3, 5, 10, 50, 100]
        values = [h_constant(b) for b in grid]
        for lo, hi in zip(values, values[1:]):
            assert lo <= hi + 1e-12
        assert all(1 / 12 <= v <= 1 / 8 for v in values)
        assert 1 / 12 < h_constant(100) < 1 / 8

    @pytest.mark.parametrize("beta", [0.0, -1.0])
    def test_rejects_non_positive(self, beta):
        with pytest.raises(ArgumentError):
            h_constant(beta)


class TestThm24:
    @pytest.mark.parametrize(
        "alpha,expected",
        [(1.0, 1 / 8), (2.0, 1 / (2 * math.sqrt(30))), (math.inf, 1 / 12), (4.0, h_constant(4 / 3))],
    )
    def test_coefficients_on_unit_interval(self, alpha, expected):
        result = thm24_bound(P("x"), P("x"), UNIT, alpha)
        assert result.value == pytest.approx(expected, rel=1e-9)
        assert statuses(result)["level1"] == Status.HOLDS

    def test_general_formula_reproduces_closed_form(self):
        iv = Interval(0.0, 2.0)
        result = thm24_bound(P("x"), P("x"), iv, 2.0)
        # (b-a)^(3/2) h(2) ‖f'‖₂ with ‖f'‖₂ = sqrt(2) on [0, 2]
        assert result.value == pytest.approx(2**1.5 * math.sqrt(2) / (2 * math.sqrt(30)), rel=1e-9)

    def test_sup_norm_variant(self):
        g = P("x^3")
        endpoint = thm24_bound(P("x"), g, Interval(-1.0, 1.0), 2.0)
        sup = thm24_bound(P("x"), g, Interval(-1.0, 1.0), 2.0, use_sup_norm=True)
        assert sup.value == pytest.approx(endpoint.value)

    def test_label(self):
        assert thm24_bound(P("x"), P("x"), UNIT, 1.5).label == "thm24@1.5"

    def test_alpha_below_one(self):
        with pytest.raises(ArgumentError):
            thm24_bound(P("x"), P("x"), UNIT, 0.5)


class TestConvexPairs:
    def test_convex_upper_equality(self):
        result = convex_pair_upper(P("x"), P("x"), UNIT)
        assert result.value == pytest.approx(1 / 12)
        assert result.direction == Direction.LE
        assert [c.case_id for c in result.companions] == ["monotone-same-sense"]

    def test_convex_upper_counterexample(self):
        result = convex_pair_upper(P("x^2"), P("x^2"), UNIT)
        assert result.measured == pytest.approx(4 / 45)
        assert statuses(result)["level1"] == Status.VIOLATED
        assert statuses(result)["monotone-same-sense"] == Status.HOLDS

    def test_concave_lower_counterexample(self):
        result = concave_pair_lower(P("sqrt(x)"), P("sqrt(x)"), UNIT)
        assert result.applicable
        assert result.measured == pytest.approx(1 / 18)
        assert statuses(result)["level1"] == Status.VIOLATED

    def test_concave_opposite_sense_companion(self):
        result = concave_pair_lower(P("sqrt(x)"), P("sqrt(1-x)"), UNIT)
        assert result.measured == pytest.approx(math.pi / 8 - 4 / 9, abs=1e-7)
        assert statuses(result)["level1"] == Status.HOLDS
        assert statuses(result)["monotone-opposite-sense"] == Status.HOLDS

    def test_convex_hypothesis(self):
        assert not convex_pair_upper(P("sin(3*x)"), P("x"), UNIT).applicable

    def test_lupas_equality_with_linear_factor(self):
        result = lupas_lower(P("x^2"), P("x"), UNIT)
        assert result.value == pytest.approx(1 / 12)
        assert result.measured == pytest.approx(1 / 12)

    @pytest.mark.parametrize("a,b", [(-1.3, 0.4), (0.0, 2.0), (1.0, 1.25)])
    def test_lupas_equality_off_the_unit_interval(self, a, b):
        result = lupas_lower(P("x^2"), P("x"), Interval(a, b))
        midpoint, length = (a + b) / 2, b - a
        assert result.measured == pytest.approx(midpoint * length**2 / 6, abs=1e-10)
        assert result.value == pytest.approx(result.measured, abs=1e-10)
        assert statuses(result)["level1"] == Status.HOLDS

    def test_lupas_scales_with_the_interval(self):
        # for f = g = x^2 both T and the bound scale as L^4 on [0, L]
        unit = lupas_lower(P("x^2"), P("x^2"), UNIT)
        wide = lupas_lower(P("x^2"), P("x^2"), Interval(0.0, 2.0))
        assert wide.value == pytest.approx(16 * unit.value, rel=1e-9)
        assert wide.measured >= wide.value

    def test_lupas_holds(self):
        result = lupas_lower(P("x^2"), P("x^2"), UNIT)
        assert result.value == pytest.approx(1 / 12)
        assert statuses(result)["level1"] == Status.HOLDS

    def test_atkinson_zero_moment(self):
        result = atkinson_bound(P("x^2"), P("(x-0.5)^2"), UNIT)
        assert result.applicable
        assert atkinson_check(P("x^2"), P("(x-0.5)^2"), UNIT).status == Status.HOLDS

    def test_atkinson_nonzero_moment(self):
        result = atkinson_bound(P("x^2"), P("x"), UNIT)
        assert not result.applicable
        assert result.parameters["moment"] == pytest.approx(1 / 12)
        assert atkinson_check(P("x^2"), P("x"), UNIT).status == Status.NOT_MET


class TestRegistry:
    def test_catalog_order_and_kinds(self):
        entries = catalog()
        ids = [t.value for t in entries]
        assert ids[0] == "cheb1"
        assert "cerone_lip" not in ids
        assert entries[TheoremId.BARNETT].kind == "mean"
        assert entries[TheoremId.THM21].kind == "pair"

    def test_every_entry_computes(self):
        f, g = P("x^2"), P("x")
        for theorem_id, entry in catalog().items():
            results = entry.compute(f, g, UNIT)
            assert results, theorem_id
            for result in results:
                assert result.measured is not None
                result.verdicts(theorem_id.value)

    def test_resolve_theorems(self):
        assert resolve_theorems(None) == list(catalog())
        assert resolve_theorems(["cerone_lip", "cerone"]) == [TheoremId.CERONE_BV]
        assert resolve_theorems(["thm21", "lupas"]) == [TheoremId.THM21, TheoremId.LUPAS]
        with pytest.raises(ArgumentError):
            resolve_theorems(["thm99"])

    def test_to_dict_strips_non_finite(self):
        data = thm21_bound(P(STEP), P("x"), UNIT).to_dict()
        assert data["value"] is None
        assert data["applicable"] is False
