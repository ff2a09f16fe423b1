"""
Generalized Pell equation |F(n,m)| = +-1: verification of the printed
parametric unit families and the companion checks
"""
import logging
import os
import re
from fractions import Fraction
from math import comb
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from pellforms.bigmath import Rational, RationalLike, integer_root, to_rational
from pellforms.errors import (
    DegenerateRadicandError,
    DomainError,
    FixtureError,
    UnknownBranchError,
)
from pellforms.families import FamilyDefinition, load_families
from pellforms.forms import NmForm, inverse, multiply, norm, one

logger = logging.getLogger(__name__)

NUMBER_TRIANGLE: Dict[int, Tuple[int, ...]] = {
    2: (1,),
    3: (1, 2),
    4: (1, 3, 5),
    5: (1, 1, 1, 2),
    6: (1, 5, 15, 30, 42),
}

SEARCH_BRANCHES = ("search_minus", "search_plus")
READINGS = ("printed", "r", "inverse")
F1_VARIANTS = ("minus", "plus_odd", "plus_even")


class Verdict(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    status: Literal["verified", "failed"]
    norm: Rational
    expected_norm: int
    residual: Rational

    @property
    def ok(self) -> bool:
        return self.status == "verified"


class PellSolution(BaseModel):
    """A candidate unit with the parameters it was built from"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    degree: int = Field(..., ge=1)
    branch: str
    reading: str = "printed"
    k: Optional[int] = None
    r: Optional[int] = None
    base: Optional[int] = Field(None, description="m of the F=+-1 theorem, when built from it")
    m: Rational
    coords: Tuple[Rational, ...]
    expected_norm: int = 1
    verdict: Optional[Verdict] = None

    def form(self) -> NmForm:
        return NmForm(n=self.degree, m=self.m, coords=self.coords)


class CubicUnitSearch(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    m: int
    k_bound: int
    degenerate: bool
    candidates_tried: int
    solution: Optional[PellSolution] = None


class GigReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    digit_counts: Dict[str, int]
    matches: Dict[str, bool]
    first_mismatch: Dict[str, Optional[int]]
    norm: Rational

    @property
    def ok(self) -> bool:
        return all(self.matches.values()) and self.norm == 1


class FreeTermRelation(BaseModel):
    order: int
    lhs: int
    expected: int

    @property
    def holds(self) -> bool:
        return self.lhs == self.expected


def norm3_closed(s0: RationalLike, s1: RationalLike, s2: RationalLike, m: RationalLike) -> Fraction:
    """s0^3 + s1^3 m + s2^3 m^2 - 3 s0 s1 s2 m"""
    s0, s1, s2, m = (to_rational(v) for v in (s0, s1, s2, m))
    return s0 ** 3 + s1 ** 3 * m + s2 ** 3 * m ** 2 - 3 * s0 * s1 * s2 * m


def norm5_closed(s: Tuple[RationalLike, ...], m: RationalLike) -> Fraction:
    """The printed degree-5 norm expansion"""
    if len(s) != 5:
        raise DomainError("norm5_closed needs five coordinates")
    s0, s1, s2, s3, s4 = (to_rational(v) for v in s)
    m = to_rational(m)
    fifth = s0 ** 5 + s1 ** 5 * m + s2 ** 5 * m ** 2 + s3 ** 5 * m ** 3 + s4 ** 5 * m ** 4
    cubes = (
        s0 ** 3 * s1 * s4 * m + s0 ** 3 * s2 * s3 * m + s1 ** 3 * s0 * s2 * m
        + s1 ** 3 * s3 * s4 * m ** 2 + s2 ** 3 * s0 * s4 * m ** 2 + s2 ** 3 * s1 * s3 * m ** 2
        + s3 ** 3 * s0 * s1 * m ** 2 + s3 ** 3 * s2 * s4 * m ** 3
        + s4 ** 3 * s0 * s3 * m ** 3 + s4 ** 3 * s1 * s2 * m ** 3
    )
    squares = (
        s0 ** 2 * s1 ** 2 * s3 * m + s0 ** 2 * s2 * s4 ** 2 * m ** 2 + s1 * s0 ** 2 * s2 ** 2 * m
        + s4 * s0 ** 2 * s3 ** 2 * m ** 2 + s0 * s4 ** 2 * s1 ** 2 * m ** 2 + s0 * s2 ** 2 * s3 ** 2 * m ** 2
        + s1 ** 2 * s4 * s2 ** 2 * m ** 2 + s2 * s1 ** 2 * s3 ** 2 * m ** 2
        + s1 * s3 ** 2 * s4 ** 2 * m ** 3 + s4 ** 2 * s2 ** 2 * s3 * m ** 3
    )
    return fifth - 5 * cubes + 5 * squares - 5 * s0 * s1 * s2 * s3 * s4 * m ** 2


def _check_parameters(k: int, r: int):
    if k < 1 or r < 1:
        raise DomainError(f"k and r must be positive integers, got k={k}, r={r}")


def _solution(defn: FamilyDefinition, k: int, r: int, reading: str,
              m: Fraction, coords: Tuple[Fraction, ...]) -> PellSolution:
    return PellSolution(degree=defn.degree, branch=defn.branch, reading=reading,
                        k=k, r=r, m=m, coords=coords)


def _search_branch(branch: str, k: int, r: int) -> PellSolution:
    """Cubic units from the consecutive-m formulas r = 3k/(k^3 -+ m)"""
    base = load_families().get(3, "1")
    m, coords = base.coordinates(k, r)
    if branch == "search_plus":
        # radicand -m reflected to m flips the sign of the odd coordinate
        m, coords = -m, (coords[0], -coords[1], coords[2])
    return PellSolution(degree=3, branch=branch, k=k, r=r, m=m, coords=coords)


def family(degree: int, branch: str, k: int, r: int, reading: str = "printed") -> PellSolution:
    """Instantiate a printed branch.

    Readings: `printed` as transcribed, `r` with the table letter taken as r,
    `inverse` as the inverse of the branch it is printed as conjugate to.
    """
    _check_parameters(k, r)
    branch = str(branch)
    if reading not in READINGS:
        raise DomainError(f"reading must be one of {READINGS}, got {reading!r}")
    if degree == 3 and branch in SEARCH_BRANCHES:
        return _search_branch(branch, k, r)

    defn = load_families().get(degree, branch)
    if reading == "inverse":
        if defn.conjugate_of is None:
            raise UnknownBranchError(f"degree {degree} branch {branch!r} has no printed partner to invert")
        partner = family(degree, defn.conjugate_of, k, r)
        inv = inverse(partner.form())
        return _solution(defn, k, r, reading, inv.m, inv.coords)

    symbol = "r" if reading == "r" else None
    m, coords = defn.coordinates(k, r, symbol=symbol)
    return _solution(defn, k, r, reading, m, coords)


def verify(sol: PellSolution) -> Verdict:
    """Determinant norm of the solution against its expected sign"""
    value = norm(sol.form())
    status = "verified" if value == sol.expected_norm else "failed"
    if status == "failed":
        logger.warning(
            f"degree {sol.degree} branch {sol.branch} ({sol.reading}) at k={sol.k}, r={sol.r}: "
            f"norm {value} != {sol.expected_norm}"
        )
    return Verdict(status=status, norm=value, expected_norm=sol.expected_norm,
                   residual=value - sol.expected_norm)


def verified(sol: PellSolution) -> PellSolution:
    return sol.model_copy(update={"verdict": verify(sol)})


def conjugate_pair_check(degree: int, branch_a: str, branch_b: str, k: int, r: int,
                         reading: str = "printed") -> bool:
    a = family(degree, branch_a, k, r)
    b = family(degree, branch_b, k, r, reading=reading)
    if not a.form().same_field(b.form()):
        return False
    return multiply(a.form(), b.form()) == one(degree, a.m)


def reflection_pairs(degree: int) -> List[Tuple[str, str]]:
    if degree == 3:
        return [("2", "1"), ("2c", "1c")]
    return [("3", "1"), ("4", "2")]


def reflection_check(degree: int, k: int, r: int) -> bool:
    """Branches 3/4 (degree 3: 2/2c) equal branches 1/2 (1/1c) taken at -r"""
    _check_parameters(k, r)
    table = load_families()
    for reflected, source in reflection_pairs(degree):
        target = table.get(degree, reflected)
        symbol = "r" if degree == 9 else None
        m_a, coords_a = target.coordinates(k, r, symbol=symbol)
        m_b, coords_b = table.get(degree, source).coordinates(k, -r, symbol=symbol)
        if (m_a, coords_a) != (m_b, coords_b):
            logger.info(f"degree {degree}: branch {reflected} is not branch {source} at -r (k={k}, r={r})")
            return False
    return True


def degree9_readings(branch: str, k: int, r: int) -> Dict[str, Verdict]:
    """Verdicts for the printed, r-substituted and inverse-of-partner readings"""
    if str(branch) not in ("2", "4"):
        raise DomainError("the three readings apply to degree-9 branches 2 and 4")
    verdicts = {}
    for reading in READINGS:
        verdicts[reading] = verify(family(9, str(branch), k, r, reading=reading))
    return verdicts


def suggest_fix(degree: int, branch: str, k: int, r: int) -> NmForm:
    """The inverse of the printed partner branch, as the corrected form"""
    return family(degree, branch, k, r, reading="inverse").form()


def find_cubic_unit(m: int, k_bound: int) -> CubicUnitSearch:
    """Search k <= k_bound with r = 3k/(k^3 - m) or 3k/(k^3 + m) a positive integer"""
    if m < 2 or k_bound < 1:
        raise DomainError("find_cubic_unit needs m >= 2 and k_bound >= 1")
    _, is_cube = integer_root(m, 3)
    if is_cube:
        logger.warning(f"m={m} is a perfect cube; Q(m^(1/3)) degenerates")

    tried = 0
    for k in range(1, k_bound + 1):
        for branch, denominator in (("search_minus", k ** 3 - m), ("search_plus", k ** 3 + m)):
            if denominator <= 0 or (3 * k) % denominator:
                continue
            tried += 1
            sol = family(3, branch, k, 3 * k // denominator)
            if sol.m != m:
                continue
            sol = verified(sol)
            if sol.verdict.ok:
                logger.info(f"cubic unit for m={m}: {branch} at k={k}, r={sol.r}")
                return CubicUnitSearch(m=m, k_bound=k_bound, degenerate=is_cube,
                                       candidates_tried=tried, solution=sol)
    return CubicUnitSearch(m=m, k_bound=k_bound, degenerate=is_cube, candidates_tried=tried)


def _f1_parameters(n: int, m: int, variant: str) -> Tuple[int, int]:
    if variant not in F1_VARIANTS:
        raise DomainError(f"variant must be one of {F1_VARIANTS}, got {variant!r}")
    if n < 2 or m < 1:
        raise DomainError("the F=+-1 solutions need n >= 2 and m >= 1")
    if variant == "minus":
        if m == 1:
            raise DegenerateRadicandError("m^n - 1 vanishes for m = 1")
        return m ** n - 1, 1
    if variant == "plus_odd":
        if n % 2 == 0:
            raise DomainError(f"plus_odd needs an odd degree, got {n}")
        return m ** n + 1, 1
    if n % 2:
        raise DomainError(f"plus_even needs an even degree, got {n}")
    return m ** n + 1, -1


def f1_solution(n: int, m: int, variant: str) -> PellSolution:
    """Coordinates m^(n-1-i) over m^n -+ 1"""
    radicand, expected = _f1_parameters(n, m, variant)
    return PellSolution(degree=n, branch=f"f1_{variant}", base=m, m=Fraction(radicand),
                        coords=tuple(Fraction(m ** (n - 1 - i)) for i in range(n)),
                        expected_norm=expected)


def f1_conjugate(n: int, m: int, variant: str) -> PellSolution:
    """(m, -1, 0, ...) for minus, (-m, 1, 0, ...) for the plus variants"""
    radicand, expected = _f1_parameters(n, m, variant)
    head = (Fraction(m), Fraction(-1)) if variant == "minus" else (Fraction(-m), Fraction(1))
    return PellSolution(degree=n, branch=f"f1_{variant}_conjugate", base=m, m=Fraction(radicand),
                        coords=head + (Fraction(0),) * (n - 2), expected_norm=expected)


def branch_moduli(degree: int) -> Tuple[int, ...]:
    """Coefficient moduli c_1..c_(d-1) of the constant-coefficient branch"""
    branch = "1c" if degree == 3 else "1"
    defn = load_families().get(degree, branch)
    if not defn.is_constant():
        raise DomainError(f"degree {degree} branch {branch} is not a constant-coefficient family")
    return tuple(abs(c[0]) for c in defn.coords[1:])


def triangle_row(degree: int) -> Tuple[int, ...]:
    if degree % 2 == 0 or (degree + 1) // 2 not in NUMBER_TRIANGLE:
        raise DomainError(f"no triangle row for degree {degree}")
    return NUMBER_TRIANGLE[(degree + 1) // 2]


def triangle_check(degree: int) -> bool:
    """Interior moduli equal the triangle row followed by its mirror"""
    row = triangle_row(degree)
    moduli = branch_moduli(degree)
    matches = moduli == row + tuple(reversed(row))
    if not matches:
        logger.warning(f"degree {degree}: moduli {moduli} do not follow triangle row {row}")
    return matches


def free_terms() -> Dict[int, int]:
    """|constant term| of the bracketed polynomials of s6..s10, degree 11 branch 2"""
    defn = load_families().get(11, "2")
    return {i: abs(defn.coords[i][0]) for i in range(6, 11)}


def free_term_relations() -> List[FreeTermRelation]:
    terms = free_terms()
    row = NUMBER_TRIANGLE[6]
    relations = []
    for q in range(5):
        lhs = sum((-1) ** j * comb(q, j) * terms[10 - q + j] for j in range(q + 1))
        relations.append(FreeTermRelation(order=q, lhs=lhs, expected=row[q]))
    return relations


def free_term_relations_check() -> bool:
    return all(rel.holds for rel in free_term_relations())


_LABEL_RE = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)\s*:\s*(.*)$")
GIG_LABELS = ("k", "m", "s0", "s1", "s2")


def parse_gig_fixture(text: str) -> Dict[str, str]:
    """Labeled digit blocks; '#' lines are comments"""
    blocks: Dict[str, List[str]] = {}
    label = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        match = _LABEL_RE.match(line)
        if match:
            label = match.group(1)
            if label in blocks:
                raise FixtureError(f"line {lineno}: block {label!r} appears twice")
            blocks[label] = []
            line = match.group(2)
        if label is None:
            raise FixtureError(f"line {lineno}: digits before the first label")
        digits = re.sub(r"\s+", "", line)
        if digits and not digits.isdigit():
            raise FixtureError(f"line {lineno}: block {label!r} holds non-digit characters")
        blocks[label].append(digits)

    missing = [name for name in GIG_LABELS if not "".join(blocks.get(name, []))]
    if missing:
        raise FixtureError(f"fixture lacks blocks: {', '.join(missing)}")
    return {name: "".join(parts) for name, parts in blocks.items()}


def _first_mismatch(expected: str, actual: str) -> Optional[int]:
    for position, (a, b) in enumerate(zip(expected, actual)):
        if a != b:
            return position
    if len(expected) != len(actual):
        return min(len(expected), len(actual))
    return None


def gig_example_verify(fixture_path: str) -> GigReport:
    """Recompute m, s0, s1, s2 from k by degree-3 branch 2 with r = k and compare digits"""
    if not os.path.exists(fixture_path):
        raise FixtureError(f"fixture not found: {fixture_path}")
    with open(fixture_path, 'r') as f:
        blocks = parse_gig_fixture(f.read())

    k = int(blocks["k"])
    sol = family(3, "2", k, k)
    computed = {"m": sol.m, "s0": sol.coords[0], "s1": sol.coords[1], "s2": sol.coords[2]}

    matches, mismatches, counts = {}, {}, {"k": len(blocks["k"])}
    for label, value in computed.items():
        text = str(value.numerator) if value.denominator == 1 else str(value)
        position = _first_mismatch(blocks[label], text)
        matches[label] = position is None
        mismatches[label] = position
        counts[label] = len(text)
        if position is not None:
            logger.warning(f"gig fixture block {label} differs from the recomputed value at digit {position}")

    value = norm3_closed(computed["s0"], computed["s1"], computed["s2"], computed["m"])
    return GigReport(digit_counts=counts, matches=matches, first_mismatch=mismatches, norm=value)
