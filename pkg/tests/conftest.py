from fractions import Fraction

import pytest
from hypothesis import strategies as st

from heunfg import elliptic as ell

LATTICE_A = (Fraction(5), Fraction(-2), Fraction(-3))
LATTICE_B = (Fraction(7), Fraction(-1), Fraction(-6))

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def lat_a():
    return ell.lattice_from_branch_points(*LATTICE_A)


@st.composite
def rational_branch_points(draw, bound=12):
    """Distinct rationals e1, e2, e3 with zero sum."""
    e1 = Fraction(draw(st.integers(-bound, bound)), draw(st.integers(1, 3)))
    e2 = Fraction(draw(st.integers(-bound, bound)), draw(st.integers(1, 3)))
    e3 = -e1 - e2
    from hypothesis import assume
    assume(len({e1, e2, e3}) == 3)
    return (e1, e2, e3)


def complex_in(box):
    part = st.floats(-box, box, allow_nan=False, allow_infinity=False)
    return st.builds(complex, part, part)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
