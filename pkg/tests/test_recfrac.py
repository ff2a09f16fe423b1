from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from pellforms.bigmath import decimal_render, format_rational, nth_root_interval
from pellforms.errors import DomainError, IndexRangeError, NonConvergenceError
from pellforms.forms import eval_interval, super_form
from pellforms.paraperm import pper_fast
from pellforms.recfrac import (
    GUARD,
    MonicRecurrencePoly,
    RecurrentFraction,
    binomial_polynomial,
    complete_homogeneous,
    denominator_matrix,
    describe_polynomial,
    dominant_root,
    fractions_equal,
    from_polynomial,
    homogeneous_from_coefficients,
    lemma1_limit_check,
    numerator_matrix,
    poly_from_roots,
    polynomial_residual,
    super_fraction,
    truncation,
    truncations,
)

from .conftest import (
    EXAMPLE_COEFFICIENTS,
    EXAMPLE_ROOT_24,
    EXAMPLE_TRUNCATIONS,
    nonzero_fractions,
    small_fractions,
)


@pytest.fixture
def example_poly():
    return MonicRecurrencePoly.of(EXAMPLE_COEFFICIENTS)


class TestPolynomial:
    def test_trailing_coefficient_required(self):
        with pytest.raises(ValidationError):
            MonicRecurrencePoly.of([1, 0])
        with pytest.raises(ValidationError):
            MonicRecurrencePoly.of([])

    def test_describe(self, example_poly):
        assert example_poly.describe() == "x^7 = 448x^6 + 672x^5 + 560x^4 + 280x^3 + 84x^2 + 14x + 1"
        assert describe_polynomial([Fraction(12), Fraction(-6), Fraction(1)]) == "x^3 = 12x^2 - 6x + 1"
        assert describe_polynomial([Fraction(0), Fraction(-1)]) == "x^2 = -1"

    def test_binomial_polynomial_is_example(self, example_poly):
        assert binomial_polynomial(7, 2, 1) == example_poly
        assert binomial_polynomial(3, 2, -1).coefficients == (12, -6, 1)


class TestTruncations:
    def test_trivial_order_one(self):
        rf = RecurrentFraction.periodic([[5]], 1)
        assert [t.value for t in truncations(rf, 4)] == [Fraction(5)] * 4

    def test_golden_ratio_continued_fraction(self):
        rf = RecurrentFraction.periodic([[1, 1]], 1)
        assert truncation(rf, 5).value == Fraction(8, 5)

    def test_example_truncations(self, example_poly):
        values = [format_rational(t.value) for t in truncations(from_polynomial(example_poly), 9)]
        assert values == EXAMPLE_TRUNCATIONS
        assert decimal_render(Fraction(899, 2), 1) == "449.5"

    def test_general_fraction_has_finite_columns(self):
        rf = RecurrentFraction.general([[1, 1], [2, 1]])
        assert truncation(rf, 2).value == Fraction(3, 2)
        with pytest.raises(IndexRangeError):
            truncation(rf, 3)

    def test_first_column_not_forced_in_numerator(self):
        rf = RecurrentFraction.general([[3, 7], [1, 1]])
        first = truncation(rf, 1)
        assert (first.p, first.q) == (Fraction(3), Fraction(1))

    def test_undefined_value_when_q_vanishes(self):
        rf = from_polynomial(MonicRecurrencePoly.of([0, -1]))
        second = truncation(rf, 2)
        assert second.q == 0 and second.value is None

    def test_periodic_requires_matching_period(self):
        with pytest.raises(ValidationError):
            RecurrentFraction(order=2, columns=((1, 1),), period=2)

    def test_ordinary(self):
        assert RecurrentFraction.periodic([[1, 1]], 1).is_ordinary
        assert not RecurrentFraction.periodic([[1, 2]], 1).is_ordinary

    @settings(max_examples=100)
    @given(st.lists(nonzero_fractions(), min_size=1, max_size=4))
    def test_one_periodic_numerators_follow_recurrence(self, coefficients):
        p = MonicRecurrencePoly.of(coefficients)
        previous = Fraction(1)
        for t in truncations(from_polynomial(p), 30):
            assert t.p == homogeneous_from_coefficients(coefficients, t.index)
            assert t.q == previous
            previous = t.p

    @settings(max_examples=100)
    @given(st.lists(nonzero_fractions(), min_size=1, max_size=4), st.integers(min_value=1, max_value=30))
    def test_parapermanent_ratio(self, coefficients, m):
        rf = from_polynomial(MonicRecurrencePoly.of(coefficients))
        t = truncation(rf, m)
        assert pper_fast(numerator_matrix(rf, m)) == t.p
        assert pper_fast(denominator_matrix(rf, m)) == t.q

    def test_example_matrix_ratios(self, example_poly):
        matrix = numerator_matrix(from_polynomial(example_poly), 7)
        ratios = [matrix.entry(7, 7 - k) for k in range(1, 7)]
        assert ratios == [Fraction(3, 2), Fraction(5, 6), Fraction(1, 2), Fraction(3, 10), Fraction(1, 6), Fraction(1, 14)]
        assert matrix.entry(7, 7) == 448

    def test_fractions_equal(self):
        a = RecurrentFraction.periodic([[2, 1]], 1)
        b = RecurrentFraction.periodic([[2, 1], [2, 1]], 2)
        c = RecurrentFraction.periodic([[2, 3]], 1)
        assert fractions_equal(a, b, 12)
        assert not fractions_equal(a, c, 12)


class TestDominantRoot:
    def test_example_root(self, example_poly):
        result = dominant_root(example_poly, 24, 200)
        assert decimal_render(result.approximation, 24) == EXAMPLE_ROOT_24
        assert result.iterations_used >= 9
        assert result.certified_digits >= 24

    def test_one_plus_sqrt2(self):
        p = MonicRecurrencePoly.of([2, 1])
        result = dominant_root(p, 10, 200)
        sqrt2 = nth_root_interval(2, 2, 30)
        assert abs(result.approximation - (1 + sqrt2.lower)) < Fraction(1, 10 ** 10)
        assert decimal_render(result.approximation, 10) == "2.4142135623"

    def test_residual_bound(self):
        p = MonicRecurrencePoly.of([3, -1, 1])
        result = dominant_root(p, 12, 500)
        slope_bound = p.order * Fraction(10 ** GUARD, 10 ** 12)
        assert result.newton_correction <= slope_bound
        assert abs(polynomial_residual(p, result.approximation)) < 1

    def test_no_dominant_real_root(self):
        with pytest.raises(NonConvergenceError) as exc_info:
            dominant_root(MonicRecurrencePoly.of([0, -1]), 10, 50)
        assert exc_info.value.evidence
        assert exc_info.value.reason == "no-certificate"

    def test_trace_kept_on_request(self, example_poly):
        result = dominant_root(example_poly, 24, 200, keep_trace=True)
        assert [format_rational(t.value) for t in result.trace[:9]] == EXAMPLE_TRUNCATIONS
        assert dominant_root(example_poly, 24, 200).trace == ()

    def test_arguments_checked(self, example_poly):
        with pytest.raises(DomainError):
            dominant_root(example_poly, 0, 10)


class TestCompleteHomogeneous:
    def test_small_values(self):
        assert complete_homogeneous([1, 2], 2) == 1 + 2 + 4
        assert complete_homogeneous([3], 4) == 81
        assert complete_homogeneous([1, 2, 3], 0) == 1

    @settings(max_examples=150)
    @given(st.lists(small_fractions(), min_size=1, max_size=4), st.integers(min_value=0, max_value=8))
    def test_enumeration_matches_recurrence(self, xs, m):
        assert complete_homogeneous(xs, m, "enumerate") == complete_homogeneous(xs, m, "recurrence")

    @settings(max_examples=60)
    @given(st.lists(nonzero_fractions(), min_size=1, max_size=4), st.integers(min_value=1, max_value=12))
    def test_numerators_from_roots(self, roots, m):
        p = poly_from_roots(roots)
        rf = from_polynomial(p)
        assert truncation(rf, m).p == complete_homogeneous(roots, m, "enumerate")

    def test_unknown_method(self):
        with pytest.raises(DomainError):
            complete_homogeneous([1], 1, "closed")


def test_ratio_approaches_dominant_root():
    p = poly_from_roots([3, 1, -1])
    gaps = [lemma1_limit_check(p, [3, 1, -1], m) for m in (4, 10, 20)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < Fraction(1, 10 ** 8)


def test_super_fraction_matches_binomial():
    assert super_fraction(7, 2) == from_polynomial(binomial_polynomial(7, 2, 1))
    with pytest.raises(DomainError):
        super_fraction(1, 2)


def test_ratio_oscillates_for_opposite_roots():
    p = poly_from_roots([3, -3])
    for m in range(1, 12):
        gap = lemma1_limit_check(p, [3, -3], m)
        if m % 2 == 0:
            assert gap is None
        else:
            assert gap == 3


def test_example_ratio_residual_at_nine(example_poly):
    enclosure = eval_interval(super_form(7, 2, 1)[0], 40)
    assert lemma1_limit_check(example_poly, [enclosure], 9) < Fraction(1, 10 ** 24)
    assert lemma1_limit_check(example_poly, [enclosure], 8) > Fraction(1, 10 ** 24)


@settings(max_examples=100)
@given(st.lists(st.tuples(st.integers(1, 9), st.integers(1, 9)), min_size=1, max_size=12))
def test_order_two_is_a_continued_fraction(columns):
    m = len(columns)
    rf = RecurrentFraction.general(columns)
    value = Fraction(columns[-1][0])
    for j in range(m - 2, -1, -1):
        value = columns[j][0] + Fraction(columns[j + 1][1]) / value
    ratio = pper_fast(numerator_matrix(rf, m)) / pper_fast(denominator_matrix(rf, m))
    assert ratio == value
    assert truncation(rf, m).value == value
