"""
Grid verification workflow for the printed Pell families
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from pellforms.bigmath import Rational
from pellforms.errors import DomainError, PellformsError
from pellforms.families import load_families
from pellforms.forms import format_form
from pellforms.pell import family, suggest_fix, verify
from pellforms.workflow_log import WorkflowLogger

logger = logging.getLogger(__name__)


class GridPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    degree: int
    branch: str
    reading: str = "printed"
    k: int
    r: int


class VerificationRecord(BaseModel):
    """One line of a verification report"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    degree: int
    branch: str
    reading: str
    k: int
    r: int
    m: Optional[Rational] = None
    norm: Optional[Rational] = None
    expected_norm: int = 1
    verdict: Literal["verified", "failed", "undefined"]
    residual: Optional[Rational] = None
    known_erratum: bool = Field(False, description="Failure of a branch recorded as a transcription erratum")
    coords: Optional[Tuple[Rational, ...]] = None
    suggested_fix: Optional[str] = None
    error: Optional[str] = Field(None, description="Error raised while building or verifying the point")

    @property
    def is_blocking_failure(self) -> bool:
        return self.verdict == "failed" and not self.known_erratum


class VerificationWorkflow:
    """Plans (degree, branch, reading, k, r) points and verifies them on a thread pool"""

    def __init__(self, workers: int = 4, include_coords: bool = False, suggest_fixes: bool = False,
                 run_logger: Optional[WorkflowLogger] = None):
        if workers < 1:
            raise DomainError("workers must be >= 1")
        self.workers = workers
        self.include_coords = include_coords
        self.suggest_fixes = suggest_fixes
        self.run_logger = run_logger
        self.table = load_families()

    def plan(self, degrees: Sequence[int], branches: Optional[Sequence[str]],
             kmax: int, rmax: int) -> List[GridPoint]:
        """Grid points in deterministic (degree, branch, reading, k, r) order"""
        if kmax < 1 or rmax < 1:
            raise DomainError("kmax and rmax must be >= 1")
        points = []
        for degree in degrees:
            available = self.table.branches(degree)
            if not available:
                raise DomainError(f"no printed families for degree {degree}")
            chosen = [b for b in available if branches is None or b in branches]
            for branch in chosen:
                defn = self.table.get(degree, branch)
                readings = ["printed"]
                if defn.symbol == "m":
                    readings += ["r", "inverse"]
                for reading in readings:
                    for k in range(1, kmax + 1):
                        for r in range(1, rmax + 1):
                            points.append(GridPoint(degree=degree, branch=branch, reading=reading, k=k, r=r))
        if self.run_logger:
            self.run_logger.log_step("plan", {"degrees": list(degrees), "points": len(points)})
        return points

    def _error_record(self, point: GridPoint, error: PellformsError, known_erratum: bool,
                      **fields) -> VerificationRecord:
        logger.warning(f"{point} raised {type(error).__name__}: {error}")
        return VerificationRecord(degree=point.degree, branch=point.branch, reading=point.reading,
                                  k=point.k, r=point.r, verdict="failed", known_erratum=known_erratum,
                                  error=f"{type(error).__name__}: {error}", **fields)

    def evaluate(self, point: GridPoint) -> VerificationRecord:
        defn = self.table.get(point.degree, point.branch)
        known_erratum = defn.erratum is not None and point.reading == "printed"
        try:
            sol = family(point.degree, point.branch, point.k, point.r, reading=point.reading)
        except DomainError as e:
            logger.debug(f"skipping {point}: {e}")
            return VerificationRecord(degree=point.degree, branch=point.branch, reading=point.reading,
                                      k=point.k, r=point.r, verdict="undefined")
        except PellformsError as e:
            return self._error_record(point, e, known_erratum)

        try:
            verdict = verify(sol)
            fix = None
            if not verdict.ok and self.suggest_fixes and defn.conjugate_of is not None and point.reading != "inverse":
                fix = format_form(suggest_fix(point.degree, point.branch, point.k, point.r))
        except PellformsError as e:
            return self._error_record(point, e, known_erratum, m=sol.m, expected_norm=sol.expected_norm)
        return VerificationRecord(
            degree=point.degree,
            branch=point.branch,
            reading=point.reading,
            k=point.k,
            r=point.r,
            m=sol.m,
            norm=verdict.norm,
            expected_norm=verdict.expected_norm,
            verdict=verdict.status,
            residual=verdict.residual,
            known_erratum=known_erratum and not verdict.ok,
            coords=sol.coords if self.include_coords else None,
            suggested_fix=fix,
        )

    def run(self, points: Sequence[GridPoint]) -> List[VerificationRecord]:
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            # map keeps submission order regardless of completion order
            records = list(pool.map(self.evaluate, points))
        if self.run_logger:
            for record in records:
                self.run_logger.log_record(record)
            failed = [r for r in records if r.verdict == "failed"]
            self.run_logger.log_decision(
                "grid verification",
                f"{len(records) - len(failed)} of {len(records)} points without failure",
                f"{sum(r.known_erratum for r in failed)} failures belong to branches with a recorded erratum",
            )
        return records


def verify_grid(degrees: Sequence[int], branches: Optional[Sequence[str]] = None, kmax: int = 5,
                rmax: int = 5, workers: int = 4, include_coords: bool = False,
                suggest_fixes: bool = False) -> List[VerificationRecord]:
    workflow = VerificationWorkflow(workers=workers, include_coords=include_coords, suggest_fixes=suggest_fixes)
    return workflow.run(workflow.plan(degrees, branches, kmax, rmax))
