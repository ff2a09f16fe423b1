from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from pellforms.errors import DomainError, IndexRangeError, ParseError
from pellforms.paraperm import (
    DDET,
    PPER,
    TriMatrix,
    algebraic_complement,
    compositions,
    corner,
    ddet_def,
    ddet_expand_table,
    ddet_fast,
    factorial_product,
    parafunction,
    pper_def,
    pper_expand_table,
    pper_fast,
)

from .conftest import tri_matrices


def test_rows_must_be_triangular():
    with pytest.raises(ValidationError):
        TriMatrix(order=2, rows=((1,), (2,)))


def test_parse_skips_comments_and_accepts_commas():
    a = TriMatrix.parse("# order 2\n1\n2, 3/4\n")
    assert a.entry(2, 2) == Fraction(3, 4)
    assert TriMatrix.parse(a.to_text()) == a


@pytest.mark.parametrize("text", ["", "1\n2", "1\n2 x"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        TriMatrix.parse(text)


def test_entry_out_of_range():
    with pytest.raises(IndexRangeError):
        TriMatrix.ones(3).entry(1, 2)


def test_compositions_lexicographic():
    assert list(compositions(3)) == [(1, 1, 1), (1, 2), (2, 1), (3,)]
    assert list(compositions(0)) == [()]


def test_corners():
    a = TriMatrix.from_rows([[1], [2, 3], [4, 5, 6]])
    assert corner(a, 3, 2).rows == ((Fraction(3),), (Fraction(5), Fraction(6)))
    assert corner(a, 2, 1).rows == ((Fraction(1),), (Fraction(2), Fraction(3)))
    assert corner(a, 0, 1).order == 0
    assert corner(a, 3, 4).order == 0
    with pytest.raises(IndexRangeError):
        corner(a, 1, 2)


def test_factorial_product():
    a = TriMatrix.from_rows([[1], [2, 3], [4, 5, 6]])
    assert factorial_product(a, 3, 1) == 120
    assert factorial_product(a, 3, 3) == 6


def test_order_two_by_hand():
    a = TriMatrix.from_rows([[2], [3, 5]])
    # compositions (1,1) -> 2*5, (2) -> 3*5
    assert pper_fast(a) == 25
    assert ddet_fast(a) == -5


def test_empty_matrix():
    assert pper_fast(TriMatrix.empty()) == 1
    assert ddet_def(TriMatrix.empty()) == 1


@pytest.mark.parametrize("n", range(1, 9))
def test_all_ones(n):
    ones = TriMatrix.ones(n)
    assert pper_fast(ones) == 2 ** (n - 1)
    assert ddet_fast(ones) == (1 if n == 1 else 0)


@settings(max_examples=200)
@given(tri_matrices(max_order=10))
def test_fast_matches_definition(a):
    assert pper_fast(a) == pper_def(a)
    assert ddet_fast(a) == ddet_def(a)


@settings(max_examples=200)
@given(tri_matrices(max_order=10), st.data())
def test_expansion_by_inscribed_table(a, data):
    i = data.draw(st.integers(min_value=1, max_value=a.order))
    assert pper_expand_table(a, i) == pper_fast(a)
    assert ddet_expand_table(a, i) == ddet_fast(a)


@settings(max_examples=100)
@given(tri_matrices(max_order=7))
def test_last_row_expansion_by_complements(a):
    n = a.order
    for kind in (PPER, DDET):
        total = sum(
            (factorial_product(a, n, s) * algebraic_complement(a, n, s, kind) for s in range(1, n + 1)),
            Fraction(0),
        )
        assert total == parafunction(a, kind)


def test_parafunction_kind_checked():
    with pytest.raises(DomainError):
        parafunction(TriMatrix.ones(2), "perm")
    assert parafunction(TriMatrix.ones(4), PPER, definitional=True) == 8


@settings(max_examples=100)
@given(tri_matrices(max_order=8))
def test_zero_first_column_splits_off_leading_entry(a):
    rows = [list(row) for row in a.rows]
    for row in rows[1:]:
        row[0] = Fraction(0)
    b = TriMatrix.from_rows(rows)
    rest = corner(b, b.order, 2)
    assert pper_fast(b) == b.entry(1, 1) * pper_fast(rest)
    assert ddet_fast(b) == b.entry(1, 1) * ddet_fast(rest)
