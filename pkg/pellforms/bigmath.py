"""
Exact scalar arithmetic and exact linear algebra kernels
"""
import logging
import re
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Annotated, Iterable, List, Sequence, Tuple, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, model_validator

from pellforms.errors import DomainError, IndexRangeError, ParseError

logger = logging.getLogger(__name__)

RationalLike = Union[int, Fraction, str]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse `p`, `-p`, `p/q` or `-p/q`"""
    match = _RATIONAL_RE.match(text)
    if not match:
        raise ParseError(f"not a rational literal: {text!r}")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(numerator, denominator)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def to_rational(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and rational literals; floats are refused"""
    if isinstance(value, bool):
        raise DomainError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise DomainError(f"cannot use {type(value).__name__} as an exact rational")


Rational = Annotated[
    Fraction,
    BeforeValidator(to_rational),
    PlainSerializer(format_rational, return_type=str),
]


def integer_root(y: int, n: int) -> Tuple[int, bool]:
    """Floor of the real n-th root of y >= 0, and whether it is exact"""
    if n < 1:
        raise DomainError(f"root index must be >= 1, got {n}")
    if y < 0:
        raise DomainError("integer_root needs a non-negative radicand")
    if y < 2 or n == 1:
        return y, True

    # Newton from above converges monotonically to the floor
    x = 1 << ((y.bit_length() + n - 1) // n)
    while True:
        nxt = ((n - 1) * x + y // x ** (n - 1)) // n
        if nxt >= x:
            break
        x = nxt
    return x, x ** n == y


class Interval(BaseModel):
    """Closed rational interval with exact endpoint arithmetic"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lower: Rational
    upper: Rational

    @model_validator(mode="after")
    def _ordered(self) -> "Interval":
        if self.lower > self.upper:
            raise ValueError(f"empty interval [{self.lower}, {self.upper}]")
        return self

    @classmethod
    def point(cls, q: RationalLike) -> "Interval":
        q = to_rational(q)
        return cls(lower=q, upper=q)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def contains(self, q: RationalLike) -> bool:
        q = to_rational(q)
        return self.lower <= q <= self.upper

    def __add__(self, other: "Interval") -> "Interval":
        other = _as_interval(other)
        return Interval(lower=self.lower + other.lower, upper=self.upper + other.upper)

    def __neg__(self) -> "Interval":
        return Interval(lower=-self.upper, upper=-self.lower)

    def __sub__(self, other: "Interval") -> "Interval":
        return self + (-_as_interval(other))

    def __mul__(self, other: "Interval") -> "Interval":
        other = _as_interval(other)
        products = (self.lower * other.lower, self.lower * other.upper,
                    self.upper * other.lower, self.upper * other.upper)
        return Interval(lower=min(products), upper=max(products))

    def scale(self, c: RationalLike) -> "Interval":
        c = to_rational(c)
        return self * Interval.point(c)

    def __pow__(self, k: int) -> "Interval":
        if k < 0:
            raise DomainError("negative interval powers are not supported")
        result = Interval.point(1)
        for _ in range(k):
            result = result * self
        return result


def _as_interval(value) -> Interval:
    if isinstance(value, Interval):
        return value
    return Interval.point(value)


class DecimalInterval(Interval):
    """Interval of width at most 10^-digits"""

    digits: int = Field(..., ge=0)

    @model_validator(mode="after")
    def _narrow(self) -> "DecimalInterval":
        if self.upper - self.lower > Fraction(1, 10 ** self.digits):
            raise ValueError(f"interval wider than 10^-{self.digits}")
        return self


def nth_root_interval(x: RationalLike, n: int, digits: int) -> DecimalInterval:
    """Bracket the real n-th root of x between consecutive multiples of 10^-digits"""
    if n < 1:
        raise DomainError(f"root index must be >= 1, got {n}")
    if digits < 0:
        raise DomainError("digits must be non-negative")
    x = to_rational(x)

    if x < 0:
        if n % 2 == 0:
            raise DomainError(f"even root (n={n}) of negative {format_rational(x)}")
        inner = nth_root_interval(-x, n, digits)
        return DecimalInterval(lower=-inner.upper, upper=-inner.lower, digits=digits)

    scale = 10 ** digits
    target = x.numerator * scale ** n
    den = x.denominator

    # largest y with (y / scale)^n <= x, by bisection on integers
    lo, hi = 0, 1
    while hi ** n * den <= target:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid ** n * den <= target:
            lo = mid
        else:
            hi = mid

    lower = Fraction(lo, scale)
    upper = lower if lo ** n * den == target else Fraction(lo + 1, scale)
    return DecimalInterval(lower=lower, upper=upper, digits=digits)


def decimal_render(q: RationalLike, digits: int) -> str:
    """Fixed-point text truncated toward zero with exactly `digits` fractional digits.

    A minus sign is printed only when some rendered digit is non-zero.
    """
    if digits < 0:
        raise DomainError("digits must be non-negative")
    q = to_rational(q)
    magnitude = abs(q)
    scaled = magnitude.numerator * 10 ** digits // magnitude.denominator
    whole, frac = divmod(scaled, 10 ** digits)
    text = str(whole) if digits == 0 else f"{whole}.{frac:0{digits}d}"
    if q < 0 and scaled:
        text = "-" + text
    return text


class SquareMatrix(BaseModel):
    """n x n matrix of rationals stored row-major"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    order: int = Field(..., ge=1)
    entries: Tuple[Rational, ...]

    @model_validator(mode="after")
    def _square(self) -> "SquareMatrix":
        if len(self.entries) != self.order * self.order:
            raise ValueError(f"expected {self.order ** 2} entries, got {len(self.entries)}")
        return self

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> "SquareMatrix":
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise DomainError("rows do not form a non-empty square matrix")
        return cls(order=n, entries=tuple(to_rational(v) for row in rows for v in row))

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        if not (0 <= i < self.order and 0 <= j < self.order):
            raise IndexRangeError(f"({i}, {j}) outside a {self.order}x{self.order} matrix")
        return self.entries[i * self.order + j]

    def rows(self) -> List[List[Fraction]]:
        n = self.order
        return [list(self.entries[i * n:(i + 1) * n]) for i in range(n)]

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(self[i, j] for i in range(self.order))

    def matmul(self, other: "SquareMatrix") -> "SquareMatrix":
        if other.order != self.order:
            raise DomainError("matrix orders differ")
        a, b = self.rows(), other.rows()
        n = self.order
        return SquareMatrix.from_rows(
            [[sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
        )

    def __matmul__(self, other: "SquareMatrix") -> "SquareMatrix":
        return self.matmul(other)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "SquareMatrix":
        rows, cols = list(rows), list(cols)
        if len(rows) != len(cols) or not rows:
            raise DomainError("submatrix needs equally many non-zero rows and columns")
        return SquareMatrix.from_rows([[self[i, j] for j in cols] for i in rows])

    def principal_minor(self, indices: Iterable[int]) -> Fraction:
        indices = list(indices)
        return det_exact(self.submatrix(indices, indices))

    def scaled(self, c: RationalLike) -> "SquareMatrix":
        c = to_rational(c)
        return SquareMatrix(order=self.order, entries=tuple(c * v for v in self.entries))


def identity(n: int) -> SquareMatrix:
    return SquareMatrix.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def _bareiss(rows: List[List[int]]) -> int:
    """Fraction-free elimination on an integer matrix"""
    n = len(rows)
    a = [list(row) for row in rows]
    sign = 1
    previous = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // previous
        previous = pivot
    return sign * a[n - 1][n - 1]


def det_rows(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant of a square list of rational rows"""
    if not rows:
        return Fraction(1)
    scales = []
    integer_rows = []
    for row in rows:
        d = reduce(lcm, (Fraction(v).denominator for v in row), 1)
        scales.append(d)
        integer_rows.append([int(Fraction(v) * d) for v in row])
    value = Fraction(_bareiss(integer_rows))
    for d in scales:
        value /= d
    return value


def det_exact(matrix: SquareMatrix) -> Fraction:
    return det_rows(matrix.rows())


def cofactor(matrix: SquareMatrix, i: int, j: int) -> Fraction:
    n = matrix.order
    if n == 1:
        return Fraction(1)
    rows = matrix.rows()
    minor = [[rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
    return (-1) ** (i + j) * det_rows(minor)


def adjugate_column(matrix: SquareMatrix, j: int) -> Tuple[Fraction, ...]:
    """Column j of the adjugate: entry i is the (j, i) cofactor"""
    return tuple(cofactor(matrix, j, i) for i in range(matrix.order))


def adjugate(matrix: SquareMatrix) -> SquareMatrix:
    n = matrix.order
    columns = [adjugate_column(matrix, j) for j in range(n)]
    return SquareMatrix.from_rows([[columns[j][i] for j in range(n)] for i in range(n)])
