from fractions import Fraction

import pytest

from legval.arith import INF, PadicVal, Prime, vp_rat
from legval.predictors import (
    PredictionContext,
    predict_b_conjecture1,
    predict_b_conjecture1_prefix,
    predict_by_recurrence,
    predict_cube_sum_v3,
    predict_strauss_shallit,
    predict_vp_Q,
    predict_vp_cigler,
    predict_vp_legendre_at_2,
    predict_vp_legendre_at_p_cases,
    predict_vp_legendre_at_p_digits,
    predict_vp_legendre_at_p_digits_prefix,
    predict_vp_legendre_general,
    predict_vp_legendre_general_oneline,
    recurrence_step,
)
from legval.sequences import (
    central_delannoy,
    cigler_eval,
    cube_sum_2k,
    legendre_eval_rodrigues,
    partial_sum_central_binomial,
    q_eval,
)

GENERAL_CASES = [
    (Prime(3), Fraction(3)),
    (Prime(3), Fraction(9)),
    (Prime(3), Fraction(3, 1)),
    (Prime(3), Fraction(-3, 5)),
    (Prime(3), Fraction(9, 7)),
    (Prime(5), Fraction(5)),
    (Prime(5), Fraction(25, 3)),
    (Prime(7), Fraction(7, 5)),
    (Prime(2), Fraction(2)),
    (Prime(2), Fraction(4, 3)),
    (Prime(2), Fraction(-6)),
]


class TestContext:
    def test_accepts_valid(self):
        PredictionContext(Prime(3), Fraction(9, 5))
        PredictionContext(Prime(3))  # r optional

    def test_rejects_low_valuation(self):
        with pytest.raises(ValueError):
            PredictionContext(Prime(3), Fraction(1, 3))
        with pytest.raises(ValueError):
            PredictionContext(Prime(5), Fraction(7))

    def test_zero_point_allowed(self):
        # vp(0) = +inf satisfies the hypothesis.
        ctx = PredictionContext(Prime(3), Fraction(0))
        assert predict_vp_legendre_general(ctx, 1).is_infinite  # P_1(0) = 0


class TestGeneralPredictor:
    def test_examples(self):
        assert predict_vp_legendre_general(PredictionContext(Prime(3), Fraction(9)), 3) == 3
        assert predict_vp_legendre_general(PredictionContext(Prime(3), Fraction(3)), 0) == 0
        assert predict_vp_legendre_general(PredictionContext(Prime(2), Fraction(2)), 2) == -1

    def test_oneline_examples(self):
        assert predict_vp_legendre_general_oneline(PredictionContext(Prime(3), Fraction(3)), 1) == 1
        assert predict_vp_legendre_general_oneline(PredictionContext(Prime(2), Fraction(2)), 1) == 1
        assert predict_vp_legendre_general_oneline(PredictionContext(Prime(5), Fraction(5)), 4) == 0

    @pytest.mark.parametrize("p,r", GENERAL_CASES)
    def test_against_exact_oracle(self, p, r):
        ctx = PredictionContext(p, r)
        for n in range(0, 120):
            actual = vp_rat(p, legendre_eval_rodrigues(n, r))
            assert predict_vp_legendre_general(ctx, n) == actual, (p, r, n)

    @pytest.mark.parametrize("p,r", GENERAL_CASES)
    def test_oneline_matches_cases(self, p, r):
        ctx = PredictionContext(p, r)
        for n in range(0, 300):
            assert predict_vp_legendre_general(ctx, n) == predict_vp_legendre_general_oneline(ctx, n)


class TestAtPPredictors:
    def test_examples(self):
        assert predict_vp_legendre_at_p_cases(Prime(3), 2) == 0
        assert predict_vp_legendre_at_p_cases(Prime(3), 3) == 2
        assert predict_vp_legendre_at_p_cases(Prime(3), 0) == 0
        assert predict_vp_legendre_at_p_digits(Prime(3), 3) == 2
        assert predict_vp_legendre_at_p_digits(Prime(3), 4) == 1
        assert predict_vp_legendre_at_p_digits(Prime(7), 0) == 0

    def test_rejects_p_equal_2(self):
        with pytest.raises(ValueError):
            predict_vp_legendre_at_p_cases(Prime(2), 4)
        with pytest.raises(ValueError):
            predict_vp_legendre_at_p_digits(Prime(2), 4)
        with pytest.raises(ValueError):
            predict_vp_cigler(Prime(2), 4)

    @pytest.mark.parametrize("p", [Prime(3), Prime(5), Prime(7)])
    def test_three_predictors_and_oracle(self, p):
        for n in range(0, 200):
            cases = predict_vp_legendre_at_p_cases(p, n)
            digits = predict_vp_legendre_at_p_digits(p, n)
            rec = predict_by_recurrence(p, n)
            actual = vp_rat(p, legendre_eval_rodrigues(n, Fraction(p)))
            assert cases == digits == rec == actual, (p, n)

    @pytest.mark.parametrize("p", [Prime(3), Prime(5)])
    def test_specializes_general(self, p):
        ctx = PredictionContext(p, Fraction(p))
        for n in range(0, 250):
            assert predict_vp_legendre_general(ctx, n) == predict_vp_legendre_at_p_cases(p, n)

    def test_prefix_batch_matches_pointwise(self):
        for p in (Prime(3), Prime(5)):
            batch = predict_vp_legendre_at_p_digits_prefix(p, 600)
            assert batch == [predict_vp_legendre_at_p_digits(p, n).value for n in range(600)]


class TestAt2Predictor:
    def test_examples(self):
        assert predict_vp_legendre_at_2(0) == 0
        assert predict_vp_legendre_at_2(1) == 1
        assert predict_vp_legendre_at_2(2) == -1

    def test_against_exact_oracle(self):
        for n in range(0, 200):
            assert predict_vp_legendre_at_2(n) == vp_rat(Prime(2), legendre_eval_rodrigues(n, 2))

    def test_specializes_general(self):
        ctx = PredictionContext(Prime(2), Fraction(2))
        for n in range(0, 250):
            assert predict_vp_legendre_general(ctx, n) == predict_vp_legendre_at_2(n)


class TestRecurrence:
    def test_step_examples(self):
        assert recurrence_step(Prime(3), PadicVal(0), 2, 1) == 1
        assert recurrence_step(Prime(5), PadicVal(0), 0, 0) == 0
        assert recurrence_step(Prime(3), PadicVal(1), 1, 0) == 2

    def test_step_validation(self):
        with pytest.raises(ValueError):
            recurrence_step(Prime(3), PadicVal(0), 1, 3)
        with pytest.raises(ValueError):
            recurrence_step(Prime(3), PadicVal(0), 1, -1)
        with pytest.raises(ValueError):
            recurrence_step(Prime(3), INF, 1, 0)

    def test_step_against_oracle(self):
        p = Prime(3)
        f = {n: vp_rat(p, Fraction(central_delannoy(n))) for n in range(0, 160)}
        for n in range(0, 50):
            for a in range(3):
                assert recurrence_step(p, f[n], n, a) == f[3 * n + a], (n, a)

    def test_fold_examples(self):
        assert predict_by_recurrence(Prime(3), 7) == 1
        assert predict_by_recurrence(Prime(3), 0) == 0
        assert predict_by_recurrence(Prime(5), 13) == predict_vp_legendre_at_p_digits(Prime(5), 13)


class TestConjecture1:
    def test_examples(self):
        assert predict_b_conjecture1(0) == 0
        assert predict_b_conjecture1(3) == 2
        assert predict_b_conjecture1(4) == 1

    def test_flagged_conjectural(self):
        assert predict_b_conjecture1.conjectural
        assert predict_cube_sum_v3.conjectural
        assert not getattr(predict_strauss_shallit, "conjectural", False)

    def test_against_exact_delannoy(self):
        for i in range(0, 250):
            assert predict_b_conjecture1(i) == vp_rat(Prime(3), Fraction(central_delannoy(i)))

    def test_matches_digit_formula(self):
        p3 = Prime(3)
        for i in range(0, 3000):
            assert predict_b_conjecture1(i) == predict_vp_legendre_at_p_digits(p3, i)

    def test_prefix_matches_pointwise(self):
        batch = predict_b_conjecture1_prefix(2000)
        assert batch == [predict_b_conjecture1(i).value for i in range(2000)]


class TestStraussShallit:
    def test_examples(self):
        assert predict_strauss_shallit(1) == 0
        assert predict_strauss_shallit(2) == 1
        assert predict_strauss_shallit(3) == 2

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            predict_strauss_shallit(0)

    def test_against_exact_oracle(self):
        for n in range(1, 300):
            actual = vp_rat(Prime(3), Fraction(partial_sum_central_binomial(n)))
            assert predict_strauss_shallit(n) == actual


class TestCubeSum:
    def test_examples(self):
        assert predict_cube_sum_v3(0) == 0
        assert predict_cube_sum_v3(2) == 1
        assert predict_cube_sum_v3(5) == 3

    def test_against_exact_oracle(self):
        for n in range(0, 250):
            assert predict_cube_sum_v3(n) == vp_rat(Prime(3), Fraction(cube_sum_2k(n)))


class TestQPredictor:
    def test_examples(self):
        assert predict_vp_Q(Prime(3), Fraction(3), 0) == 0
        assert predict_vp_Q(Prime(2), Fraction(2), 1) == 2
        assert predict_vp_Q(Prime(3), Fraction(9), 3) == 3

    def test_rejects_hypothesis_violation(self):
        with pytest.raises(ValueError):
            predict_vp_Q(Prime(3), Fraction(1, 3), 2)

    @pytest.mark.parametrize("p,r", GENERAL_CASES)
    def test_against_exact_oracle(self, p, r):
        for n in range(0, 100):
            assert predict_vp_Q(p, r, n) == vp_rat(p, q_eval(n, r)), (p, r, n)

    @pytest.mark.parametrize("p,r", GENERAL_CASES)
    def test_scaling_bridge(self, p, r):
        ctx = PredictionContext(p, r)
        shift = 1 if p == 2 else 0
        for n in range(0, 100):
            assert predict_vp_Q(p, r, n) == predict_vp_legendre_general(ctx, n) + n * shift


class TestCiglerPredictor:
    def test_examples(self):
        assert predict_vp_cigler(Prime(3), 1) == 1
        assert predict_vp_cigler(Prime(3), 2) == 0
        assert predict_vp_cigler(Prime(3), 0) == 0

    @pytest.mark.parametrize("p", [Prime(3), Prime(5), Prime(7)])
    def test_against_exact_oracle(self, p):
        for n in range(0, 120):
            assert predict_vp_cigler(p, n) == vp_rat(p, cigler_eval(n, Fraction(p)))
