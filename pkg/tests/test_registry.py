from fractions import Fraction

import pytest

from heunfg import registry as R
from heunfg.polyalg import Poly

from conftest import LATTICE_A, LATTICE_B

LOW = [k for k in R.keys() if R.reference(k, LATTICE_A).genus <= 2]


@pytest.mark.parametrize("expr", ["__import__('os')", "E.real", "E ** -1", "E / E", "f(E)",
                                  "[E]", "E if E else 1", "2 ** E", "1.5 * E", "zz + 1"])
def test_evaluator_rejects_unsafe_or_unknown_input(expr):
    ev = R._Eval(R._env(LATTICE_A))
    with pytest.raises(ValueError):
        ev(expr)


def test_evaluator_arithmetic():
    ev = R._Eval(R._env(LATTICE_A))
    assert ev("(E - e1)**2 / 2 + g2").to_poly(0) == Poly([Fraction(25, 2) + 76, -5, Fraction(1, 2)])


@pytest.mark.parametrize("ls", LOW, ids=str)
@pytest.mark.parametrize("e", [LATTICE_A, LATTICE_B], ids=["A", "B"])
def test_low_genus_regression(ls, e):
    assert R.compare(ls, e) == []


def test_alias_entry():
    ref = R.reference((1, 1, 1, 0), LATTICE_A)
    base = R.reference((2, 0, 0, 0), LATTICE_A)
    assert ref.alias_of == (2, 0, 0, 0)
    assert ref.Q == base.Q


def test_unknown_key():
    with pytest.raises(KeyError):
        R.reference((5, 0, 0, 0), LATTICE_A)
