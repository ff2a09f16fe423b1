"""
Exact arithmetic in Q(m^(1/n)) on (n,m)-forms
"""
import logging
import re
from fractions import Fraction
from itertools import combinations
from math import ceil
from typing import List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from pellforms.bigmath import (
    Interval,
    Rational,
    RationalLike,
    SquareMatrix,
    adjugate_column,
    decimal_render,
    det_exact,
    format_rational,
    nth_root_interval,
    parse_rational,
    to_rational,
)
from pellforms.errors import (
    CertificationError,
    DegenerateRadicandError,
    DomainError,
    FieldMismatchError,
    ParseError,
    ZeroNormError,
)
from pellforms.recfrac import MonicRecurrencePoly, binomial_polynomial

logger = logging.getLogger(__name__)

MAX_GUARD_DIGITS = 64


class NmForm(BaseModel):
    """s_0 + s_1 m^(1/n) + ... + s_(n-1) m^((n-1)/n)"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(..., ge=1)
    m: Rational
    coords: Tuple[Rational, ...]

    @model_validator(mode="after")
    def _length(self) -> "NmForm":
        if len(self.coords) != self.n:
            raise ValueError(f"a ({self.n}, m)-form needs {self.n} coordinates, got {len(self.coords)}")
        return self

    @classmethod
    def of(cls, n: int, m: RationalLike, coords: Sequence[RationalLike]) -> "NmForm":
        return cls(n=n, m=to_rational(m), coords=tuple(to_rational(s) for s in coords))

    def same_field(self, other: "NmForm") -> bool:
        return self.n == other.n and self.m == other.m

    def __mul__(self, other):
        if isinstance(other, NmForm):
            return multiply(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __add__(self, other: "NmForm") -> "NmForm":
        return add(self, other)

    def __sub__(self, other: "NmForm") -> "NmForm":
        return sub(self, other)

    def __neg__(self) -> "NmForm":
        return neg(self)

    def __pow__(self, k: int) -> "NmForm":
        return power(self, k)

    def __str__(self) -> str:
        return format_form(self)


class CirculantEmbedding(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    m: Rational
    matrix: SquareMatrix

    def first_column(self) -> Tuple[Fraction, ...]:
        return self.matrix.column(0)

    def to_form(self) -> NmForm:
        return NmForm.of(self.n, self.m, self.first_column())


def _require_same_field(x: NmForm, y: NmForm):
    if not x.same_field(y):
        raise FieldMismatchError(
            f"forms over ({x.n}, {format_rational(x.m)}) and ({y.n}, {format_rational(y.m)}) cannot be combined"
        )


def one(n: int, m: RationalLike) -> NmForm:
    return NmForm.of(n, m, [1] + [0] * (n - 1))


def zero(n: int, m: RationalLike) -> NmForm:
    return NmForm.of(n, m, [0] * n)


def generator(n: int, m: RationalLike) -> NmForm:
    """The form m^(1/n)"""
    if n == 1:
        return NmForm.of(1, m, [m])
    return NmForm.of(n, m, [0, 1] + [0] * (n - 2))


def scalar(n: int, m: RationalLike, c: RationalLike) -> NmForm:
    return NmForm.of(n, m, [c] + [0] * (n - 1))


def embed(x: NmForm) -> CirculantEmbedding:
    """Entry (i, j) is s_(i-j) below the diagonal and m * s_(n+i-j) above it"""
    n, m, s = x.n, x.m, x.coords
    rows = [[s[i - j] if i >= j else m * s[n + i - j] for j in range(n)] for i in range(n)]
    return CirculantEmbedding(n=n, m=m, matrix=SquareMatrix.from_rows(rows))


def multiply(x: NmForm, y: NmForm) -> NmForm:
    _require_same_field(x, y)
    n, m = x.n, x.m
    a, b = x.coords, y.coords
    coords = []
    for i in range(n):
        low = sum((a[j] * b[i - j] for j in range(i + 1)), Fraction(0))
        # the wrapped index n + i - j carries the factor m
        high = sum((a[j] * b[n + i - j] for j in range(i + 1, n)), Fraction(0))
        coords.append(low + m * high)
    return NmForm(n=n, m=m, coords=tuple(coords))


def add(x: NmForm, y: NmForm) -> NmForm:
    _require_same_field(x, y)
    return NmForm(n=x.n, m=x.m, coords=tuple(a + b for a, b in zip(x.coords, y.coords)))


def neg(x: NmForm) -> NmForm:
    return NmForm(n=x.n, m=x.m, coords=tuple(-a for a in x.coords))


def sub(x: NmForm, y: NmForm) -> NmForm:
    return add(x, neg(y))


def scale(x: NmForm, c: RationalLike) -> NmForm:
    c = to_rational(c)
    return NmForm(n=x.n, m=x.m, coords=tuple(c * a for a in x.coords))


def power(x: NmForm, k: int) -> NmForm:
    if k < 0:
        return power(inverse(x), -k)
    result = one(x.n, x.m)
    base = x
    while k:
        if k & 1:
            result = multiply(result, base)
        base = multiply(base, base)
        k >>= 1
    return result


def norm(x: NmForm) -> Fraction:
    """Determinant of the circulant embedding"""
    return det_exact(embed(x).matrix)


def conjugate(x: NmForm) -> NmForm:
    """The form whose embedding is the adjugate of embed(x)"""
    matrix = embed(x).matrix
    if det_exact(matrix) == 0:
        raise ZeroNormError(f"{format_form(x)} has norm 0 and no conjugate")
    return NmForm(n=x.n, m=x.m, coords=adjugate_column(matrix, 0))


def inverse(x: NmForm) -> NmForm:
    value = norm(x)
    if value == 0:
        raise ZeroNormError(f"{format_form(x)} has norm 0 and is not invertible")
    return scale(conjugate(x), 1 / value)


def is_unit(x: NmForm) -> bool:
    """Integer coordinates over an integer radicand with norm +1 or -1"""
    if x.m.denominator != 1 or any(s.denominator != 1 for s in x.coords):
        return False
    return abs(norm(x)) == 1


def min_poly_coeffs(x: NmForm) -> Tuple[Fraction, ...]:
    """a_j = (-1)^(j-1) times the sum of all j x j principal minors of embed(x)"""
    matrix = embed(x).matrix
    n = x.n
    coefficients = []
    for j in range(1, n + 1):
        total = sum((matrix.principal_minor(subset) for subset in combinations(range(n), j)), Fraction(0))
        coefficients.append((-1) ** (j - 1) * total)
    return tuple(coefficients)


def min_poly_closed(x: NmForm) -> Tuple[Fraction, ...]:
    """Orbit-representative formulas for n = 2..5"""
    n = x.n
    if n not in (2, 3, 4, 5):
        raise DomainError(f"closed coefficient formulas exist for n = 2..5, not {n}")
    matrix = embed(x).matrix
    s0 = x.coords[0]
    full = det_exact(matrix)
    if n == 2:
        return (2 * s0, -full)
    if n == 3:
        return (3 * s0, -3 * matrix.principal_minor((0, 1)), full)
    if n == 4:
        return (
            4 * s0,
            -4 * matrix.principal_minor((0, 1)) - 2 * matrix.principal_minor((0, 2)),
            4 * matrix.principal_minor((0, 1, 2)),
            -full,
        )
    return (
        5 * s0,
        -5 * matrix.principal_minor((0, 1)) - 5 * matrix.principal_minor((0, 2)),
        5 * matrix.principal_minor((0, 1, 2)) + 5 * matrix.principal_minor((0, 1, 3)),
        -5 * matrix.principal_minor((0, 1, 2, 3)),
        full,
    )


def poly_at_form(x: NmForm, coefficients: Sequence[RationalLike]) -> NmForm:
    """x^n - sum a_i x^(n-i) in form arithmetic"""
    coefficients = [to_rational(a) for a in coefficients]
    value = one(x.n, x.m)
    for a in coefficients:
        value = sub(multiply(value, x), scalar(x.n, x.m, a))
    return value


def super_form(n: int, m: int, sign: int) -> Tuple[NmForm, MonicRecurrencePoly]:
    """(n, m^n + sign)-form with coords m^(n-1-i), paired with its binomial polynomial"""
    if n < 2 or m < 1:
        raise DomainError("super forms need n >= 2 and m >= 1")
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    radicand = m ** n + sign
    if radicand == 0:
        raise DegenerateRadicandError(f"m^n - 1 vanishes for m = {m}")
    form = NmForm.of(n, radicand, [m ** (n - 1 - i) for i in range(n)])
    return form, binomial_polynomial(n, m, sign)


def eval_interval(x: NmForm, precision: int) -> Interval:
    """Enclosure of the real value using a 10^-precision bracket on m^(1/n)"""
    root = nth_root_interval(x.m, x.n, precision)
    total = Interval.point(0)
    current = Interval.point(1)
    for s in x.coords:
        total = total + current.scale(s)
        current = current * root
    return total


def eval_decimal(x: NmForm, digits: int) -> str:
    """Certified decimal text of the form, truncated toward zero"""
    if x.m < 0 and x.n % 2 == 0:
        raise DomainError(f"even root (n={x.n}) of negative radicand {format_rational(x.m)}")
    magnitude = sum((abs(s) for s in x.coords), Fraction(0)) * max(1, abs(x.m))
    scale_digits = len(str(ceil(magnitude))) + x.n
    for extra in range(4, MAX_GUARD_DIGITS + 1, 4):
        enclosure = eval_interval(x, digits + scale_digits + extra)
        low = decimal_render(enclosure.lower, digits)
        high = decimal_render(enclosure.upper, digits)
        if low == high:
            return low
        logger.debug(f"eval_decimal: {extra} guard digits do not separate the value, refining")
    raise CertificationError(
        f"could not certify {digits} digits of {format_form(x)} within {MAX_GUARD_DIGITS} guard digits"
    )


_FORM_RE = re.compile(r"^\s*\(\s*(\d+)\s*,\s*([^,\[\]]+?)\s*,\s*\[(.*)\]\s*\)\s*$")


def parse_form(text: str) -> NmForm:
    """Parse `(n, m, [s0, s1, ...])` with rational literals"""
    match = _FORM_RE.match(text)
    if not match:
        raise ParseError(f"not a form literal (n, m, [s0, ...]): {text!r}")
    n = int(match.group(1))
    if n < 1:
        raise ParseError("form degree must be >= 1")
    m = parse_rational(match.group(2))
    body = match.group(3).strip()
    coords: List[Fraction] = [parse_rational(t) for t in body.split(",")] if body else []
    if len(coords) != n:
        raise ParseError(f"a ({n}, m)-form needs {n} coordinates, got {len(coords)}")
    return NmForm(n=n, m=m, coords=tuple(coords))


def format_form(x: NmForm) -> str:
    coords = ", ".join(format_rational(s) for s in x.coords)
    return f"({x.n}, {format_rational(x.m)}, [{coords}])"
