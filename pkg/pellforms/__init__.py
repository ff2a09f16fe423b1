"""
pellforms - recurrent fractions, parapermanents and units of Q(m^(1/n))
"""
from pellforms.errors import NonConvergenceError, PellformsError
from pellforms.forms import NmForm, multiply, norm, parse_form
from pellforms.paraperm import TriMatrix, parafunction
from pellforms.recfrac import MonicRecurrencePoly, RecurrentFraction, dominant_root

__version__ = "1.0.0"

__all__ = [
    "MonicRecurrencePoly",
    "NmForm",
    "NonConvergenceError",
    "PellformsError",
    "RecurrentFraction",
    "TriMatrix",
    "dominant_root",
    "multiply",
    "norm",
    "parafunction",
    "parse_form",
]
