from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heunfg import elliptic as ell
from heunfg.case import get_case
from heunfg.xi import (SYMMETRIES, Couplings, build_Q, build_xi, evaluate_xi, invariants,
                       symmetry_transport)

from conftest import LATTICE_A, rational_branch_points

small_couplings = st.tuples(*[st.integers(0, 2)] * 4).filter(lambda t: 0 < sum(t) <= 4)


def taylor(f, x, r, n=48):
    """Derivatives 0..3 of an analytic f at x from samples on a circle."""
    th = 2 * np.pi * np.arange(n) / n
    vals = f(x + r * np.exp(1j * th))
    out = []
    fact = 1
    for k in range(4):
        fact = fact * k if k else 1
        out.append(fact * np.mean(vals * np.exp(-1j * k * th)) / r ** k)
    return out


def potential_fn(C, L):
    def v(x):
        return sum(l * (l + 1) * ell.wp(x + L.omega(i), L) for i, l in enumerate(C.as_tuple()) if l)
    return v


def test_couplings_validation():
    with pytest.raises(ValueError):
        Couplings(0, 0, 0, 0)
    with pytest.raises(ValueError):
        Couplings(1, -1, 0, 0)
    C = Couplings(2, 1, 1, 0)
    assert (C.l, C.s, C.parity) == (4, 10, 0)


def test_lame_one_gap():
    case = get_case((1, 0, 0, 0), LATTICE_A)
    assert case.genus == 1
    assert case.xi.a.deg == 0 and case.xi.c.deg == 1


@settings(max_examples=20, deadline=None)
@given(rational_branch_points())
def test_lame_spectral_curve(es):
    X = build_xi((1, 0, 0, 0), es)
    Q = build_Q(X).Q
    E = Q.gen()
    assert Q == (E + es[0]) * (E + es[1]) * (E + es[2])


@settings(max_examples=25, deadline=None)
@given(small_couplings, rational_branch_points(bound=6))
def test_degree_of_Q(ls, es):
    X = build_xi(ls, es)
    Q = build_Q(X).Q
    assert Q.deg == 2 * X.genus + 1
    assert Q.lc == 1


@pytest.mark.parametrize("ls", [(1, 0, 0, 0), (2, 0, 0, 0), (1, 1, 0, 0), (2, 1, 1, 0), (0, 1, 1, 1)])
def test_xi_solves_third_order_equation(ls, lat_a):
    C = Couplings.of(ls)
    X = get_case(ls, LATTICE_A).xi
    Q = get_case(ls, LATTICE_A).Q
    v = potential_fn(C, lat_a)
    rng = np.random.default_rng(3)
    for _ in range(4):
        x = complex(*rng.uniform(0.2, 0.4, 2)) * lat_a.omega1 + 0.3 * lat_a.omega3
        E = complex(*rng.uniform(-5, 5, 2))
        f = lambda z: evaluate_xi(X, z, E, lat_a)
        F0, F1, F2, F3 = taylor(f, x, 0.02)
        V0, V1, _, _ = taylor(v, x, 0.02)
        resid = F3 - 4 * (V0 - E) * F1 - 2 * V1 * F0
        assert abs(resid) < 1e-7 * max(1, abs(F3), abs(V0 * F1))
        # the conserved quantity equals Q(E)
        q = F0 * F0 * (E - V0) + 0.5 * F0 * F2 - 0.25 * F1 * F1
        assert abs(q - complex(Q(E))) < 1e-7 * max(1, abs(q))


def test_large_coupling_bound():
    with pytest.raises(NotImplementedError):
        build_xi((13, 0, 0, 0), LATTICE_A)


@settings(max_examples=15, deadline=None)
@given(small_couplings, st.sampled_from(sorted(SYMMETRIES)))
def test_symmetries_preserve_Q_a_c(ls, name):
    C2, e2 = symmetry_transport(ls, name, LATTICE_A)
    X1, X2 = build_xi(ls, LATTICE_A), build_xi(C2, e2)
    assert build_Q(X1).Q == build_Q(X2).Q
    assert X1.a == X2.a and X1.c == X2.c


def test_symmetry_transport_without_lattice():
    C2, perm = symmetry_transport((2, 1, 0, 0), "shift_w2")
    assert C2.as_tuple() == (0, 0, 2, 1) and perm == (0, 1, 2)


def test_invariants():
    g2, g3 = invariants(LATTICE_A)
    assert (g2, g3) == (Fraction(76), Fraction(120))
