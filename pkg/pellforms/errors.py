"""
Exception hierarchy for pellforms
"""
from typing import List, Optional


class PellformsError(Exception):
    """Base class for every error raised by pellforms"""


class DomainError(PellformsError, ValueError):
    """An argument lies outside the mathematical domain of an operation"""


class IndexRangeError(PellformsError, IndexError):
    """Matrix or coefficient index out of range"""


class ParseError(PellformsError, ValueError):
    """Malformed rational, form literal or matrix text"""


class FieldMismatchError(PellformsError, ValueError):
    """Forms from different (n, m) fields were combined"""


class ZeroNormError(PellformsError, ZeroDivisionError):
    """The form has norm zero and is not invertible"""


class DegenerateRadicandError(DomainError):
    """The radicand collapses the field (zero radicand)"""


class UnknownBranchError(PellformsError, KeyError):
    """No printed family exists for the requested degree and branch"""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown branch"


class CertificationError(PellformsError):
    """Interval evaluation could not certify the requested digits"""


class FixtureError(PellformsError, ValueError):
    """The worked-example fixture is missing or malformed"""


class ConfigError(PellformsError, ValueError):
    """Invalid configuration value"""


class NonConvergenceError(PellformsError):
    """Truncations did not settle; the dominant-root precondition likely fails"""

    def __init__(self, message: str, evidence: Optional[List[str]] = None,
                 reason: str = "no-agreement"):
        super().__init__(message)
        self.evidence = evidence or []
        self.reason = reason
