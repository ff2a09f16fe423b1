"""
Recurrent fractions of order n: truncations by linear recurrences, 1-periodic
fractions built from polynomial coefficients and the dominant-root loop
"""
import logging
from collections import deque
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from pellforms.bigmath import Interval, Rational, RationalLike, decimal_render, format_rational, to_rational
from pellforms.errors import DomainError, IndexRangeError, NonConvergenceError
from pellforms.paraperm import TriMatrix, corner

logger = logging.getLogger(__name__)

# guard digits allowed in the Newton-correction certificate
GUARD = 2
AGREEMENT_WINDOW = 3


class MonicRecurrencePoly(BaseModel):
    """x^n = a_1 x^(n-1) + a_2 x^(n-2) + ... + a_n with a_n != 0"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coefficients: Tuple[Rational, ...]

    @model_validator(mode="after")
    def _trailing(self) -> "MonicRecurrencePoly":
        if not self.coefficients:
            raise ValueError("a polynomial needs at least one coefficient")
        if self.coefficients[-1] == 0:
            raise ValueError("trailing coefficient a_n must be non-zero")
        return self

    @classmethod
    def of(cls, coefficients: Sequence[RationalLike]) -> "MonicRecurrencePoly":
        return cls(coefficients=tuple(to_rational(a) for a in coefficients))

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def describe(self) -> str:
        return describe_polynomial(self.coefficients)


def describe_polynomial(coefficients: Sequence[Fraction]) -> str:
    """Render x^n = a_1 x^(n-1) + ... + a_n"""
    n = len(coefficients)
    terms = []
    for i, a in enumerate(coefficients, start=1):
        if a == 0:
            continue
        power = n - i
        monomial = "" if power == 0 else ("x" if power == 1 else f"x^{power}")
        magnitude = abs(a)
        if monomial and magnitude == 1:
            body = monomial
        else:
            body = format_rational(magnitude) + monomial
        sign = "-" if a < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return f"x^{n} = 0"
    first_sign, first_body = terms[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    lhs = "x" if n == 1 else f"x^{n}"
    return f"{lhs} = {text}"


class RecurrentFraction(BaseModel):
    """Order-n coefficient schedule; column j holds (a_1j, ..., a_nj).

    With `period` set the listed columns repeat; otherwise only the listed
    columns exist and later indices are out of range.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    order: int = Field(..., ge=1)
    columns: Tuple[Tuple[Rational, ...], ...]
    period: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def _shape(self) -> "RecurrentFraction":
        if not self.columns:
            raise ValueError("a recurrent fraction needs at least one column")
        for j, column in enumerate(self.columns, start=1):
            if len(column) != self.order:
                raise ValueError(f"column {j} must hold {self.order} coefficients")
        if self.period is not None and self.period != len(self.columns):
            raise ValueError(f"period {self.period} does not match {len(self.columns)} columns")
        return self

    @classmethod
    def general(cls, columns: Sequence[Sequence[RationalLike]]) -> "RecurrentFraction":
        cols = tuple(tuple(to_rational(a) for a in c) for c in columns)
        return cls(order=len(cols[0]) if cols else 1, columns=cols)

    @classmethod
    def periodic(cls, columns: Sequence[Sequence[RationalLike]], k: int) -> "RecurrentFraction":
        cols = tuple(tuple(to_rational(a) for a in c) for c in columns)
        return cls(order=len(cols[0]) if cols else 1, columns=cols, period=k)

    def column(self, j: int) -> Tuple[Fraction, ...]:
        if j < 1:
            raise IndexRangeError(f"column index must be >= 1, got {j}")
        if self.period is not None:
            return self.columns[(j - 1) % self.period]
        if j > len(self.columns):
            raise IndexRangeError(f"general fraction defines {len(self.columns)} columns, asked for {j}")
        return self.columns[j - 1]

    @property
    def is_ordinary(self) -> bool:
        """a_{n,j} = 1 for every defined j >= n"""
        if self.period is not None:
            return all(c[-1] == 1 for c in self.columns)
        return all(c[-1] == 1 for c in self.columns[self.order - 1:])


class Truncation(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    index: int
    p: Rational
    q: Rational

    @computed_field
    @property
    def value(self) -> Optional[Rational]:
        if self.q == 0:
            return None
        return self.p / self.q


class RootApproximation(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    approximation: Rational
    iterations_used: int
    certified_digits: int
    newton_correction: Rational
    trace: Tuple[Truncation, ...] = ()


def truncations(rf: RecurrentFraction, upto: int) -> Iterator[Truncation]:
    """Yield truncations m = 1..upto; a_{n,1} = 1 is forced in the Q recurrence only"""
    n = rf.order
    p_window = deque([Fraction(0)] * (n - 1) + [Fraction(1)], maxlen=n)
    q_window = deque([Fraction(1)] + [Fraction(0)] * (n - 1), maxlen=n)
    for m in range(1, upto + 1):
        col = rf.column(m)
        q_col = col[:-1] + (Fraction(1),) if m == 1 else col
        p_next = sum((a * p_window[-1 - i] for i, a in enumerate(col)), Fraction(0))
        q_next = sum((a * q_window[-1 - i] for i, a in enumerate(q_col)), Fraction(0))
        p_window.append(p_next)
        q_window.append(q_next)
        yield Truncation(index=m, p=p_next, q=q_next)


def truncation(rf: RecurrentFraction, m: int) -> Truncation:
    if m < 1:
        raise DomainError(f"truncation index must be >= 1, got {m}")
    last = None
    for last in truncations(rf, m):
        pass
    return last


def from_polynomial(p: MonicRecurrencePoly) -> RecurrentFraction:
    """The 1-periodic fraction with constant column (a_1, ..., a_n)"""
    if p.coefficients[-1] == 0:
        raise DomainError("trailing coefficient a_n must be non-zero")
    return RecurrentFraction(order=p.order, columns=(p.coefficients,), period=1)


def numerator_matrix(rf: RecurrentFraction, m: int) -> TriMatrix:
    """Triangular matrix whose parapermanent is P_m.

    Row i carries a_1i on the diagonal and a_{k+1,i}/a_{k,i} at distance k.
    """
    if m < 1:
        raise DomainError(f"truncation index must be >= 1, got {m}")
    n = rf.order
    rows: List[List[Fraction]] = []
    for i in range(1, m + 1):
        col = rf.column(i)
        row = [Fraction(0)] * i
        row[i - 1] = col[0]
        for k in range(1, min(n, i)):
            if col[k - 1] == 0:
                raise DomainError(f"ratio a[{k + 1},{i}]/a[{k},{i}] has a zero denominator")
            row[i - 1 - k] = col[k] / col[k - 1]
        rows.append(row)
    return TriMatrix.from_rows(rows)


def denominator_matrix(rf: RecurrentFraction, m: int) -> TriMatrix:
    """Corner R_{m,2} of the numerator matrix; parapermanent Q_m"""
    full = numerator_matrix(rf, m)
    if m == 1:
        return TriMatrix.empty()
    return corner(full, m, 2)


def fractions_equal(rf1: RecurrentFraction, rf2: RecurrentFraction, bound: int) -> bool:
    """Compare truncation values for m = 1..bound; undefined matches undefined"""
    for t1, t2 in zip(truncations(rf1, bound), truncations(rf2, bound)):
        if t1.value != t2.value:
            logger.debug(f"fractions differ at m={t1.index}")
            return False
    return True


def polynomial_residual(p: MonicRecurrencePoly, x: RationalLike) -> Fraction:
    """x^n - sum a_i x^(n-i)"""
    x = to_rational(x)
    value = Fraction(1)
    for a in p.coefficients:
        value = value * x - a
    return value


def polynomial_derivative(p: MonicRecurrencePoly, x: RationalLike) -> Fraction:
    x = to_rational(x)
    n = p.order
    coefficients = [Fraction(1)] + [-a for a in p.coefficients]
    value = Fraction(0)
    for i, c in enumerate(coefficients[:-1]):
        value = value * x + c * (n - i)
    return value


def newton_correction(p: MonicRecurrencePoly, x: RationalLike) -> Optional[Fraction]:
    """|p(x)/p'(x)|, or None at a critical point"""
    slope = polynomial_derivative(p, x)
    if slope == 0:
        return None
    return abs(polynomial_residual(p, x) / slope)


def _stable_digits(previous: Fraction, current: Fraction, cap: int) -> int:
    diff = abs(current - previous)
    if diff == 0:
        return cap
    digits = 0
    while digits < cap and diff * 10 ** (digits + 1) <= 1:
        digits += 1
    return digits


def dominant_root(p: MonicRecurrencePoly, target_digits: int, max_iterations: int,
                  keep_trace: bool = False) -> RootApproximation:
    """Run the truncations of the 1-periodic fraction until they settle.

    Settled means three consecutive defined values pairwise within
    10^-target_digits and a Newton correction no larger than
    n * 10^-(target_digits - GUARD) at the last of them.
    """
    if target_digits < 1 or max_iterations < 1:
        raise DomainError("target_digits and max_iterations must be positive")
    rf = from_polynomial(p)
    tolerance = Fraction(1, 10 ** target_digits)
    bound = p.order * Fraction(10 ** GUARD, 10 ** target_digits)
    window: deque = deque(maxlen=AGREEMENT_WINDOW)
    seen: List[Truncation] = []

    for t in truncations(rf, max_iterations):
        seen.append(t)
        if t.value is None:
            logger.debug(f"m={t.index}: Q_m = 0, value undefined")
            continue
        window.append(t.value)
        if len(window) < AGREEMENT_WINDOW:
            continue
        values = list(window)
        if any(abs(a - b) > tolerance for a in values for b in values):
            continue
        correction = newton_correction(p, values[-1])
        if correction is None or correction > bound:
            continue
        digits = _stable_digits(values[-2], values[-1], cap=max(target_digits, 4 * target_digits))
        logger.info(f"dominant root certified at m={t.index} with {digits} stable digits")
        return RootApproximation(
            approximation=values[-1],
            iterations_used=t.index,
            certified_digits=digits,
            newton_correction=correction,
            trace=tuple(seen) if keep_trace else (),
        )

    evidence = []
    for t in seen[-6:]:
        if t.value is None:
            evidence.append(f"m={t.index}: undefined (Q_m = 0)")
        else:
            evidence.append(f"m={t.index}: {format_rational(t.value)} ~ {decimal_render(t.value, 12)}")
    reason = "oscillation" if len({t.value for t in seen[-6:] if t.value is not None}) > 1 else "no-certificate"
    logger.warning(f"no convergence after {max_iterations} truncations ({reason})")
    raise NonConvergenceError(
        f"truncations did not settle within {max_iterations} iterations; "
        "the polynomial likely lacks a strictly dominant real root",
        evidence=evidence,
        reason=reason,
    )


def elementary_symmetric(xs: Sequence[RationalLike]) -> List[Fraction]:
    """[e_0, e_1, ..., e_n]"""
    e = [Fraction(1)] + [Fraction(0)] * len(xs)
    for count, x in enumerate(xs, start=1):
        x = to_rational(x)
        for i in range(count, 0, -1):
            e[i] += x * e[i - 1]
    return e


def poly_from_roots(xs: Sequence[RationalLike]) -> MonicRecurrencePoly:
    """The polynomial with roots xs, as a_i = (-1)^(i-1) e_i"""
    e = elementary_symmetric(xs)
    return MonicRecurrencePoly.of([(-1) ** (i - 1) * e[i] for i in range(1, len(e))])


def homogeneous_from_coefficients(coefficients: Sequence[RationalLike], m: int) -> Fraction:
    """u_m = sum a_i u_(m-i), u_0 = 1, u_(<0) = 0"""
    a = [to_rational(c) for c in coefficients]
    n = len(a)
    window = deque([Fraction(0)] * (n - 1) + [Fraction(1)], maxlen=max(n, 1))
    if m == 0:
        return Fraction(1)
    if n == 0:
        return Fraction(0)
    for _ in range(m):
        window.append(sum((a[i] * window[-1 - i] for i in range(n)), Fraction(0)))
    return window[-1]


def complete_homogeneous_enumerate(xs: Sequence[RationalLike], m: int) -> Fraction:
    xs = [to_rational(x) for x in xs]
    total = Fraction(0)
    for combo in combinations_with_replacement(range(len(xs)), m):
        term = Fraction(1)
        for i in combo:
            term *= xs[i]
        total += term
    return total


def complete_homogeneous_recurrence(xs: Sequence[RationalLike], m: int) -> Fraction:
    e = elementary_symmetric(xs)
    return homogeneous_from_coefficients([(-1) ** (i - 1) * e[i] for i in range(1, len(e))], m)


def complete_homogeneous(xs: Sequence[RationalLike], m: int, method: str = "recurrence") -> Fraction:
    if m < 0:
        raise DomainError("degree m must be non-negative")
    if method == "recurrence":
        return complete_homogeneous_recurrence(xs, m)
    if method == "enumerate":
        return complete_homogeneous_enumerate(xs, m)
    raise DomainError(f"unknown method {method!r}")


def lemma1_limit_check(p: MonicRecurrencePoly, roots: Sequence[Union[Interval, RationalLike]],
                       m: int) -> Optional[Fraction]:
    """Largest distance from p_m/p_(m-1) to the dominant root interval roots[0].

    None when p_(m-1) vanishes.
    """
    if m < 1:
        raise DomainError("m must be >= 1")
    if not roots:
        raise DomainError("at least the dominant root must be supplied")
    dominant = roots[0] if isinstance(roots[0], Interval) else Interval.point(roots[0])
    previous = homogeneous_from_coefficients(p.coefficients, m - 1)
    if previous == 0:
        return None
    ratio = homogeneous_from_coefficients(p.coefficients, m) / previous
    return max(abs(ratio - dominant.lower), abs(ratio - dominant.upper))


def binomial_polynomial(n: int, m: int, sign: int) -> MonicRecurrencePoly:
    """x^n = sum_s sign^(s-1) C(n,s) m^(n-s) x^(n-s)"""
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    if n < 1 or m < 1:
        raise DomainError("n and m must be positive")
    return MonicRecurrencePoly.of([sign ** (s - 1) * comb(n, s) * m ** (n - s) for s in range(1, n + 1)])


def super_fraction(n: int, m: int) -> RecurrentFraction:
    """1-periodic fraction converging to the (n, m^n + 1) super-form"""
    if n < 2 or m < 1:
        raise DomainError("super_fraction needs n >= 2 and m >= 1")
    return from_polynomial(binomial_polynomial(n, m, 1))
