"""
Coefficient tables of the printed Pell families, loaded from config/pell_families.json
"""
import json
import logging
import os
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from pellforms.config import get_settings
from pellforms.errors import ConfigError, DomainError, UnknownBranchError

logger = logging.getLogger(__name__)


def poly_eval(coefficients: List[int], t: Fraction) -> Fraction:
    """Ascending coefficient list evaluated by Horner's rule"""
    value = Fraction(0)
    for c in reversed(coefficients):
        value = value * t + c
    return value


class FamilyDefinition(BaseModel):
    """One printed branch: m and every coordinate as polynomials in t"""
    model_config = ConfigDict(frozen=True)

    degree: int = Field(..., ge=2)
    branch: str
    symbol: str = Field("r", description="Letter inside the coordinate polynomials: r, or m as printed")
    m_numerator: List[int]
    m_denominator: List[int] = [1]
    coords: List[List[int]]
    conjugate_of: Optional[str] = None
    note: Optional[str] = None
    erratum: Optional[str] = None

    @model_validator(mode="after")
    def _shape(self) -> "FamilyDefinition":
        if self.symbol not in ("r", "m"):
            raise ValueError(f"symbol must be 'r' or 'm', got {self.symbol!r}")
        if len(self.coords) != self.degree:
            raise ValueError(f"degree {self.degree} branch {self.branch} lists {len(self.coords)} coordinates")
        return self

    def radicand(self, k: int, r: int) -> Fraction:
        """m = (k/r) * N(t)/D(t) with t = r*k^(d-1)"""
        t = Fraction(r * k ** (self.degree - 1))
        denominator = poly_eval(self.m_denominator, t)
        if denominator == 0:
            raise DomainError(f"m is undefined for degree {self.degree} branch {self.branch} at k={k}, r={r}")
        return Fraction(k, r) * poly_eval(self.m_numerator, t) / denominator

    def coordinates(self, k: int, r: int, symbol: Optional[str] = None) -> Tuple[Fraction, Tuple[Fraction, ...]]:
        """(m, coords) with the table letter read as `symbol` (default: as printed)"""
        if k == 0 or r == 0:
            raise DomainError("k and r must be non-zero")
        symbol = symbol or self.symbol
        m = self.radicand(k, r)
        x = Fraction(r) if symbol == "r" else m
        d = self.degree
        t = x * k ** (d - 1)
        coords = [poly_eval(self.coords[0], t)]
        for i in range(1, d):
            coords.append(x * k ** (d - 1 - i) * poly_eval(self.coords[i], t))
        return m, tuple(coords)

    def is_constant(self) -> bool:
        return all(len(c) == 1 for c in self.coords)


class FamilyTable(BaseModel):
    version: str = "1.0"
    description: str = ""
    families: List[FamilyDefinition]

    def get(self, degree: int, branch: str) -> FamilyDefinition:
        for family in self.families:
            if family.degree == degree and family.branch == str(branch):
                return family
        raise UnknownBranchError(f"no printed family for degree {degree} branch {branch!r}")

    def degrees(self) -> List[int]:
        return sorted({f.degree for f in self.families})

    def branches(self, degree: int) -> List[str]:
        return [f.branch for f in self.families if f.degree == degree]


def load_families(path: Optional[str] = None) -> FamilyTable:
    """Load and validate the family tables; defaults to the configured path"""
    return _load_table(path or get_settings().families_path)


@lru_cache(maxsize=8)
def _load_table(path: str) -> FamilyTable:
    if not os.path.exists(path):
        raise ConfigError(f"family table not found: {path}")
    try:
        with open(path, 'r') as f:
            table = FamilyTable(**json.load(f))
    except (json.JSONDecodeError, ValidationError) as e:
        raise ConfigError(f"invalid family table {path}: {e}")
    logger.debug(f"Loaded {len(table.families)} family branches from {path}")
    return table
