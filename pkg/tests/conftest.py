from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from convseq import FiniteSpec

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

small_fraction = st.fractions(min_value=-5, max_value=5, max_denominator=7)
nonzero_fraction = small_fraction.filter(lambda x: x != 0)


@st.composite
def rational_problems(draw, max_m=3, max_len=6, max_N=60):
    """(b, m, N) with exact rational finite b and b0 != 0."""
    head = draw(nonzero_fraction)
    tail = draw(st.lists(small_fraction, max_size=max_len - 1))
    m = draw(st.integers(1, max_m))
    N = draw(st.integers(m, max_N))
    return FiniteSpec([head, *tail]), m, N


def frac_list(*xs):
    return [Fraction(x) for x in xs]


@pytest.fixture
def quartic():
    """b = [5, -4, -3, 3]: sums to one, weighted index mean -1."""
    return FiniteSpec([5, -4, -3, 3])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
