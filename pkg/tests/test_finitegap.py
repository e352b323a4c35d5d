from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heunfg.case import get_case
from heunfg.finitegap import (covering_map, descending_image, gauge_potential, heun_polys,
                              heun_set, invariant_spaces, poly_sqrt, structural_report)
from heunfg.polyalg import Poly
from heunfg.xi import Couplings

from conftest import LATTICE_A, rational_branch_points

couplings = st.tuples(*[st.integers(0, 3)] * 4).filter(lambda t: 0 < sum(t) <= 5)
fracs = st.builds(Fraction, st.integers(-30, 30), st.integers(1, 5))


@settings(max_examples=60, deadline=None)
@given(couplings, rational_branch_points())
def test_gauge_potential_closed_form(ls, es):
    l0, l1, l2, l3 = ls
    l = sum(ls)
    got = Poly([c.constant_value() for c in gauge_potential(ls, es)])
    e1, e2, e3 = es
    want = Poly([e1 * (l2 + l3) ** 2 + e2 * (l1 + l3) ** 2 + e3 * (l1 + l2) ** 2,
                 -l * (l1 + l2 + l3 - l0 - 1)])
    assert got == want


@given(st.lists(fracs, min_size=1, max_size=5))
def test_poly_sqrt(cs):
    p = Poly(cs)
    if p.is_zero():
        return
    assert poly_sqrt(p * p * 9) == p * 3 or poly_sqrt(p * p * 9) == p * -3
    assert poly_sqrt(p * p * 9 + Poly([0, 0]) + p * 0 + Poly([1])) is None or p.deg == 0


@pytest.mark.parametrize("ls", [(1, 0, 0, 0), (2, 1, 0, 0), (3, 1, 1, 0), (1, 0, 2, 1)])
def test_invariant_space_dimensions_sum_to_degree(ls):
    spaces = invariant_spaces(ls)
    case = get_case(ls, LATTICE_A)
    assert sum(sp.dim for sp in spaces.values()) == case.Q.deg


@settings(max_examples=12, deadline=None)
@given(couplings)
def test_product_of_heun_polynomials_is_Q(ls):
    case = get_case(ls, LATTICE_A)
    prod = Poly([1])
    for h in heun_polys(ls, LATTICE_A):
        prod = prod * h
    assert prod == case.Q


@pytest.mark.parametrize("ls", [(2, 0, 0, 0), (2, 1, 1, 0), (3, 2, 1, 0), (0, 1, 1, 1)])
def test_structural_laws(ls):
    case = get_case(ls, LATTICE_A)
    assert all(structural_report(case.heun, case.Q, case.genus).values())


@settings(max_examples=10, deadline=None)
@given(couplings)
def test_covering_forms_agree_for_any_ordering(ls):
    covering_map(heun_set(ls, LATTICE_A))


def test_shared_root_is_restored():
    # here the twisted polynomial for k = 3 shares the root E = -13 with H3
    hs = heun_set((2, 0, 1, 1), LATTICE_A)
    E = Poly.gen()
    assert hs.H[3] == E + 13
    assert hs.Ht[3] == (E - 27) * (E + 13)


@settings(max_examples=20, deadline=None)
@given(couplings)
def test_descending_image(ls):
    C2, e2, idx = descending_image(ls, LATTICE_A)
    t = C2.as_tuple()
    assert list(t) == sorted(t, reverse=True) and sorted(t) == sorted(ls)
    assert sorted(idx) == [0, 1, 2, 3] and idx[0] == 0
    assert sorted(e2) == sorted(LATTICE_A)


def test_covering_for_lame_is_minus_E():
    cov = covering_map(heun_set((1, 0, 0, 0), LATTICE_A))
    assert cov.xi.num == Poly([0, -1]) and cov.xi.den == Poly([1])
    assert cov.kappa_sq_ratio.num.is_zero()


def test_json_round_trip_of_heun_set():
    hs = heun_set((2, 0, 0, 0), LATTICE_A)
    js = hs.to_json()
    assert [Poly.from_json(h) for h in js["H"]] == list(hs.H)


def test_theta_law_is_vacuous_when_kappa_vanishes():
    case = get_case((0, 0, 1, 0), LATTICE_A)
    assert case.couplings.s == 2 and case.heun.Htheta == Poly([1])
    assert structural_report(case.heun, case.Q, case.genus)["theta_degree_law"]
