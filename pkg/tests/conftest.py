from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from pellforms.config import get_settings

settings.register_profile(
    "pellforms",
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("pellforms")

EXAMPLE_COEFFICIENTS = [448, 672, 560, 280, 84, 14, 1]
EXAMPLE_TRUNCATIONS = [
    "448",
    "899/2",
    "808197/1798",
    "242188503/538798",
    "217726387201/484377006",
    "195735053879083/435452774402",
    "1231754601116629931/2740290754307162",
    "553670954436947106368/1231754601116629931",
    "1666566046544461900687/3707617998461699373",
]
EXAMPLE_ROOT_24 = "449.497776533592352870153020"


@pytest.fixture(autouse=True)
def quiet_settings(monkeypatch, tmp_path):
    """Isolated PELLFORMS_* environment; logs kept off stdout and out of the repo"""
    monkeypatch.setenv("PELLFORMS_LOG_LEVEL", "ERROR")
    monkeypatch.setenv("PELLFORMS_LOG_DIR", "")
    monkeypatch.setenv("PELLFORMS_REPORT_DIR", str(tmp_path / "reports"))
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


def small_fractions(bound: int = 9, max_denominator: int = 5):
    return st.builds(
        Fraction,
        st.integers(min_value=-bound, max_value=bound),
        st.integers(min_value=1, max_value=max_denominator),
    )


def nonzero_fractions(bound: int = 9, max_denominator: int = 5):
    return small_fractions(bound, max_denominator).filter(lambda q: q != 0)


@st.composite
def tri_matrices(draw, max_order: int = 6):
    from pellforms.paraperm import TriMatrix

    n = draw(st.integers(min_value=1, max_value=max_order))
    rows = [draw(st.lists(small_fractions(), min_size=i, max_size=i)) for i in range(1, n + 1)]
    return TriMatrix.from_rows(rows)


@st.composite
def forms(draw, degrees=(2, 3, 4)):
    from pellforms.forms import NmForm

    n = draw(st.sampled_from(degrees))
    m = draw(st.integers(min_value=-6, max_value=6).filter(lambda v: v != 0))
    coords = draw(st.lists(st.integers(min_value=-5, max_value=5), min_size=n, max_size=n))
    return NmForm.of(n, m, coords)
