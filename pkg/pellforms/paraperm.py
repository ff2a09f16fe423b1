"""
Triangular matrices, corners, factorial products and the parafunctions
(parapermanent and paradeterminant) with definitional and expansion evaluators
"""
import logging
import re
from fractions import Fraction
from typing import Iterator, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from pellforms.bigmath import Rational, RationalLike, format_rational, parse_rational, to_rational
from pellforms.errors import DomainError, IndexRangeError, ParseError

logger = logging.getLogger(__name__)

PPER = "pper"
DDET = "ddet"


class TriMatrix(BaseModel):
    """Lower-triangular array a_ij, 1 <= j <= i <= order.

    Order 0 is the empty corner; both parafunctions of it equal 1.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    order: int = Field(..., ge=0)
    rows: Tuple[Tuple[Rational, ...], ...]

    @model_validator(mode="after")
    def _triangular(self) -> "TriMatrix":
        if len(self.rows) != self.order:
            raise ValueError(f"expected {self.order} rows, got {len(self.rows)}")
        for i, row in enumerate(self.rows, start=1):
            if len(row) != i:
                raise ValueError(f"row {i} must hold {i} entries, got {len(row)}")
        return self

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> "TriMatrix":
        return cls(order=len(rows), rows=tuple(tuple(to_rational(v) for v in row) for row in rows))

    @classmethod
    def ones(cls, n: int) -> "TriMatrix":
        return cls.from_rows([[1] * i for i in range(1, n + 1)])

    @classmethod
    def empty(cls) -> "TriMatrix":
        return cls(order=0, rows=())

    @classmethod
    def parse(cls, text: str) -> "TriMatrix":
        """One row per line; entries separated by whitespace or commas"""
        rows: List[List[Fraction]] = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = [t for t in re.split(r"[\s,]+", line) if t]
            try:
                rows.append([parse_rational(t) for t in tokens])
            except ParseError as e:
                raise ParseError(f"row {len(rows) + 1}: {e}")
        if not rows:
            raise ParseError("matrix text holds no rows")
        for i, row in enumerate(rows, start=1):
            if len(row) != i:
                raise ParseError(f"row {i} must hold {i} entries, got {len(row)}")
        return cls.from_rows(rows)

    def entry(self, i: int, j: int) -> Fraction:
        """a_ij with 1-based indices"""
        if not (1 <= j <= i <= self.order):
            raise IndexRangeError(f"a[{i},{j}] outside a triangular matrix of order {self.order}")
        return self.rows[i - 1][j - 1]

    def to_text(self) -> str:
        return "\n".join(" ".join(format_rational(v) for v in row) for row in self.rows)


def corner(a: TriMatrix, i: int, j: int) -> TriMatrix:
    """R_ij(A): rows j..i, columns j..row, with a_ij bottom-left"""
    n = a.order
    if (i, j) == (0, 1) or (i, j) == (n, n + 1):
        return TriMatrix.empty()
    if not (1 <= j <= i <= n):
        raise IndexRangeError(f"corner R[{i},{j}] outside order {n}")
    return TriMatrix(
        order=i - j + 1,
        rows=tuple(tuple(a.rows[r - 1][j - 1:r]) for r in range(j, i + 1)),
    )


def factorial_product(a: TriMatrix, i: int, j: int) -> Fraction:
    """{a_ij}: product of row i from column j through the diagonal"""
    if not (1 <= j <= i <= a.order):
        raise IndexRangeError(f"{{a[{i},{j}]}} outside order {a.order}")
    value = Fraction(1)
    for s in range(j, i + 1):
        value *= a.rows[i - 1][s - 1]
    return value


def _factorial_table(a: TriMatrix) -> List[List[Fraction]]:
    """table[i][j] = {a_ij} (1-based, O(n^2) via suffix products per row)"""
    n = a.order
    table = [[Fraction(0)] * (n + 2) for _ in range(n + 1)]
    for i in range(1, n + 1):
        product = Fraction(1)
        for j in range(i, 0, -1):
            product *= a.rows[i - 1][j - 1]
            table[i][j] = product
    return table


def compositions(n: int) -> Iterator[Tuple[int, ...]]:
    """Compositions of n in lexicographic order; n = 0 yields the empty one"""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def _parafunction_def(a: TriMatrix, signed: bool) -> Fraction:
    n = a.order
    if n == 0:
        return Fraction(1)
    table = _factorial_table(a)
    total = Fraction(0)
    for parts in compositions(n):
        term = Fraction(1)
        end = 0
        for p in parts:
            start = end + 1
            end += p
            term *= table[end][start]
        if signed and (n - len(parts)) % 2:
            term = -term
        total += term
    return total


def pper_def(a: TriMatrix) -> Fraction:
    return _parafunction_def(a, signed=False)


def ddet_def(a: TriMatrix) -> Fraction:
    return _parafunction_def(a, signed=True)


def _suffix_values(a: TriMatrix, table, signed: bool) -> List[Fraction]:
    """values[c] = parafunction of R_{n,c}, c = 1..n+1"""
    n = a.order
    values = [Fraction(0)] * (n + 2)
    values[n + 1] = Fraction(1)
    for c in range(n, 0, -1):
        total = Fraction(0)
        for r in range(c, n + 1):
            term = table[r][c] * values[r + 1]
            total += -term if signed and (r - c) % 2 else term
        values[c] = total
    return values


def _prefix_values(a: TriMatrix, table, signed: bool) -> List[Fraction]:
    """values[j] = parafunction of R_{j,1}, j = 0..n"""
    n = a.order
    values = [Fraction(0)] * (n + 1)
    values[0] = Fraction(1)
    for j in range(1, n + 1):
        total = Fraction(0)
        for s in range(1, j + 1):
            term = table[j][s] * values[s - 1]
            total += -term if signed and (j - s) % 2 else term
        values[j] = total
    return values


def pper_fast(a: TriMatrix) -> Fraction:
    if a.order == 0:
        return Fraction(1)
    return _suffix_values(a, _factorial_table(a), signed=False)[1]


def ddet_fast(a: TriMatrix) -> Fraction:
    if a.order == 0:
        return Fraction(1)
    return _suffix_values(a, _factorial_table(a), signed=True)[1]


def _expand_table(a: TriMatrix, i: int, signed: bool) -> Fraction:
    n = a.order
    if not (1 <= i <= n):
        raise IndexRangeError(f"inscribed table row {i} outside order {n}")
    table = _factorial_table(a)
    prefix = _prefix_values(a, table, signed)
    suffix = _suffix_values(a, table, signed)
    total = Fraction(0)
    for s in range(1, i + 1):
        for r in range(i, n + 1):
            term = table[r][s] * prefix[s - 1] * suffix[r + 1]
            total += -term if signed and (r + s) % 2 else term
    return total


def pper_expand_table(a: TriMatrix, i: int) -> Fraction:
    """Expansion over the inscribed rectangular table with key row i"""
    return _expand_table(a, i, signed=False)


def ddet_expand_table(a: TriMatrix, i: int) -> Fraction:
    return _expand_table(a, i, signed=True)


def algebraic_complement(a: TriMatrix, r: int, s: int, kind: str = PPER) -> Fraction:
    """P_rs or D_rs of the element a_rs"""
    if kind not in (PPER, DDET):
        raise DomainError(f"kind must be {PPER!r} or {DDET!r}")
    if not (1 <= s <= r <= a.order):
        raise IndexRangeError(f"a[{r},{s}] outside order {a.order}")
    left = corner(a, s - 1, 1) if s > 1 else TriMatrix.empty()
    right = corner(a, a.order, r + 1)
    if kind == PPER:
        return pper_fast(left) * pper_fast(right)
    return (-1) ** (r + s) * ddet_fast(left) * ddet_fast(right)


def parafunction(a: TriMatrix, kind: str = PPER, definitional: bool = False) -> Fraction:
    if kind == PPER:
        return pper_def(a) if definitional else pper_fast(a)
    if kind == DDET:
        return ddet_def(a) if definitional else ddet_fast(a)
    raise DomainError(f"kind must be {PPER!r} or {DDET!r}")
