import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heunfg import elliptic as ell
from heunfg.case import get_case
from heunfg.errors import AtBranchPoint, Unclassified
from heunfg.hka import (continue_sqrt, cover_point, degenerate_point, half_period_multipliers,
                        nu_path, validate_covering)
from heunfg.polyalg import roots_numeric
from heunfg.verify import monodromy_check

from conftest import LATTICE_A

energies = st.builds(complex, st.floats(-30, 30), st.floats(-30, 30))


def test_continue_sqrt_flips_around_a_simple_zero():
    loop = [1 + 0.5 * np.exp(2j * np.pi * k / 12) for k in range(13)]
    s0 = np.sqrt(loop[0] - 1)
    assert abs(continue_sqrt(lambda t: t - 1, loop, s0=s0) + s0) < 1e-12
    # enclosing two zeros leaves the branch unchanged
    big = [3 * np.exp(2j * np.pi * k / 24) for k in range(25)]
    f = lambda t: (t - 1) * (t + 1)
    s0 = np.sqrt(f(big[0]))
    assert abs(continue_sqrt(f, big, s0=s0) - s0) < 1e-10


def test_nu_path_side():
    assert nu_path(3 - 2j, -50)[1].imag < 0
    assert nu_path(3.0, -50)[1].imag > 0


@pytest.mark.parametrize("ls", [(1, 0, 0, 0), (2, 0, 0, 0), (2, 1, 0, 0), (1, 1, 1, 1),
                                (0, 0, 2, 1), (0, 1, 1, 1), (0, 2, 0, 0), (3, 1, 1, 0)])
def test_covering_matches_numeric_ansatz(ls):
    case = get_case(ls, LATTICE_A)
    rng = np.random.default_rng(7)
    for E in rng.uniform(-25, 25, (8, 2)) @ np.array([1, 1j]):
        rep = validate_covering(cover_point(case.xi, case.lattice, E), case.heun, case.couplings)
        assert rep.ok, rep
        assert rep.kappa_residual < 1e-8


@settings(max_examples=25, deadline=None)
@given(energies)
def test_alpha_lies_on_the_curve(E):
    case = get_case((2, 1, 0, 0), LATTICE_A)
    cp = cover_point(case.xi, case.lattice, E)
    assert ell.on_curve_residual(cp.wp_alpha, cp.wp_prime_alpha, case.lattice) < 1e-8
    assert abs(cp.sqrtQ ** 2 + complex(case.Q(E))) < 1e-9 * max(1, abs(cp.sqrtQ) ** 2)


def test_lame_has_zero_kappa():
    case = get_case((1, 0, 0, 0), LATTICE_A)
    for E in (1 + 2j, -7 + 0.5j, 30j):
        cp = cover_point(case.xi, case.lattice, E)
        assert abs(cp.kappa) < 1e-9
        assert abs(cp.wp_alpha + E) < 1e-9 * abs(E)


@pytest.mark.parametrize("ls", [(0, 0, 2, 1), (0, 1, 1, 1), (1, 0, 1, 0)])
def test_poles_away_from_origin_agree_with_ode(ls):
    for E in (1.5 + 0.7j, -2 - 3j):
        for k in (1, 2, 3):
            assert monodromy_check(ls, LATTICE_A, E, k).residual < 1e-6


def test_half_period_multipliers():
    assert half_period_multipliers(0) == (1, 1, 1)
    assert half_period_multipliers(2) == (-1, 1, -1)


def test_multiplier_at_half_periods_matches_signs(lat_a):
    for i in range(1, 4):
        w = lat_a.omega(i)
        for k in (1, 2, 3):
            m = np.exp(-2 * lat_a.eta_k(k) * w + 2 * lat_a.omega(k) * lat_a.eta_k(i))
            assert abs(m - half_period_multipliers(i)[k - 1]) < 1e-10


def test_band_edges():
    case = get_case((2, 0, 0, 0), LATTICE_A)
    for i, h in enumerate(case.heun.H):
        for r in roots_numeric(h):
            assert degenerate_point(case.heun, complex(r))[0] == i
            with pytest.raises(AtBranchPoint):
                cover_point(case.xi, case.lattice, complex(r))
    with pytest.raises(Unclassified):
        degenerate_point(case.heun, 0.123 + 4j)
