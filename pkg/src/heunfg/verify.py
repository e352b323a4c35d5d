"""Numerical and exact checks of the reduction formulas and of the monodromy.

First kind:   d xi/dE / wp'(alpha)       = -a(E) / (2 nu)
Second kind:  c(E) / (2 nu)              = -d kappa/dE + xi * (d xi/dE) / wp'(alpha)
with nu = sqrt(-Q(E)), xi = wp(alpha) and kappa = (1 - 2/s) Htheta/(H0 Ht0) nu.
Eliminating the radicals gives two identities between rational functions of E,
checked exactly by ``exact_identities``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

from . import elliptic as ell
from .case import get_case
from .errors import PoleOnPath, StiffFailure
from .hka import continue_sqrt, cover_point, degenerate_point, prepare
from .polyalg import Poly, RatE
from .xi import invariants


def _lam(C):
    return Fraction(C.s - 2, C.s)


def _theta_ratio(case):
    HS = case.heun
    return RatE(HS.Htheta, HS.H[0] * HS.Ht[0])


# --- exact identities -----------------------------------------------------------------

def exact_identities(C, e):
    """Radical-free forms of both reductions, as exact rational-function equalities."""
    case = get_case(C, e)
    g2, g3 = invariants(case.e)
    xi = case.covering.xi
    dxi = xi.deriv()
    Q = RatE(case.Q)
    a, c = RatE(case.xi.a), RatE(case.xi.c)
    cubic = xi * xi * xi * 4 - xi * RatE(Poly([g2])) - RatE(Poly([g3]))
    first = dxi * dxi * (-Q) * 4 == a * a * cubic
    R = _theta_ratio(case)
    lam = RatE(Poly([_lam(case.couplings)]))
    second = c + a * xi == lam * (Q * R.deriv() * 2 + RatE(case.Q.deriv()) * R)
    return {"first_kind": first, "second_kind": second}


# --- pointwise checks on a grid --------------------------------------------------------

@dataclass(frozen=True)
class ReductionCheck:
    grid: tuple
    residual_first_kind: tuple = ()
    residual_second_kind: tuple = ()

    @property
    def max_first(self):
        return max(self.residual_first_kind, default=0.0)

    @property
    def max_second(self):
        return max(self.residual_second_kind, default=0.0)


def default_grid(n=50, start=-37 + 11j, end=53 + 17j):
    return tuple(np.linspace(start, end, n))


def _tracked(case, grid):
    """nu and wp'(alpha) along the grid, sharing the basepoint of the Ansatz."""
    L = case.lattice
    P = prepare(case.xi, L)
    xi = case.covering.xi
    g2, g3 = L.g2, L.g3

    def cubic(E):
        v = complex(xi(E))
        return 4 * v ** 3 - g2 * v - g3

    nus, rads = [], []
    nu = P.nu(grid[0])
    rad = cover_point(case.xi, L, grid[0], nu=nu).wp_prime_alpha
    prev = grid[0]
    for E in grid:
        if E != prev:
            nu = continue_sqrt(lambda t: -complex(P.Q(t)), [prev, E], s0=nu)
            rad = continue_sqrt(cubic, [prev, E], s0=rad)
        nus.append(nu)
        rads.append(rad)
        prev = E
    return nus, rads


def _rel(lhs, rhs):
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


def check_first_kind(C, e, grid=None) -> ReductionCheck:
    case = get_case(C, e)
    grid = tuple(complex(E) for E in (grid if grid is not None else default_grid()))
    nus, rads = _tracked(case, grid)
    dxi = case.covering.xi.deriv()
    a = case.xi.a
    res = tuple(_rel(complex(dxi(E)) / r, -complex(a(E)) / (2 * nu))
                for E, nu, r in zip(grid, nus, rads))
    return ReductionCheck(grid, residual_first_kind=res)


def check_second_kind(C, e, grid=None, E0=None) -> ReductionCheck:
    """The differentiated second-kind identity; E0 (a band edge) only fixes the
    integration constant and is classified for the record."""
    case = get_case(C, e)
    if E0 is not None:
        degenerate_point(case.heun, E0)
    grid = tuple(complex(E) for E in (grid if grid is not None else default_grid()))
    nus, rads = _tracked(case, grid)
    xi = case.covering.xi
    dxi = xi.deriv()
    R = _theta_ratio(case)
    dR = R.deriv()
    dQ = case.Q.deriv()
    lam = float(_lam(case.couplings))
    c = case.xi.c
    res = []
    for E, nu, rad in zip(grid, nus, rads):
        dkappa = lam * (complex(dR(E)) * nu - complex(R(E)) * complex(dQ(E)) / (2 * nu))
        lhs = complex(c(E)) / (2 * nu)
        rhs = -dkappa + complex(xi(E)) * complex(dxi(E)) / rad
        res.append(_rel(lhs, rhs))
    return ReductionCheck(grid, residual_second_kind=tuple(res))


# --- the classical formulas ---------------------------------------------------------------

def check_hermite_classical(a, b, z_grid):
    """Derivative forms of the two classical reductions with y = (2z^3-b)/(3(z^2-a)).

    sqrt((z^2-a)(8z^3-6az-b)) is continued along the grid from its principal value,
    sqrt(y^3-3ay+b) from the sign fixed by the first formula at z_grid[0], and
    sqrt((8z^3-6az-b)/(z^2-a)) is tied to the first radical divided by z^2-a.
    """
    a, b = float(a), float(b)
    z_grid = [complex(z) for z in z_grid]

    def y(z):
        return (2 * z ** 3 - b) / (3 * (z ** 2 - a))

    def dy(z):
        return (2 * z ** 4 - 6 * a * z ** 2 + 2 * b * z) / (3 * (z ** 2 - a) ** 2)

    def r1(z):
        return (z ** 2 - a) * (8 * z ** 3 - 6 * a * z - b)

    def dr1(z):
        return 2 * z * (8 * z ** 3 - 6 * a * z - b) + (z ** 2 - a) * (24 * z ** 2 - 6 * a)

    def r2(z):
        w = y(z)
        return w ** 3 - 3 * a * w + b

    k = 1 / (2 * np.sqrt(3))
    z0 = z_grid[0]
    s1 = np.sqrt(r1(z0))
    s2 = np.sqrt(r2(z0))
    if abs(z0 / s1 - k * dy(z0) / s2) > abs(z0 / s1 + k * dy(z0) / s2):
        s2 = -s2
    first, second = [], []
    prev = z0
    for z in z_grid:
        if z != prev:
            s1 = continue_sqrt(r1, [prev, z], s0=s1)
            s2 = continue_sqrt(r2, [prev, z], s0=s2)
        prev = z
        first.append(_rel(z / s1, k * dy(z) / s2))
        du = dr1(z) / (2 * s1 * (z ** 2 - a)) - 2 * z * s1 / (z ** 2 - a) ** 2
        lhs = (2 * z ** 2 - a) / s1 - du / 3
        second.append(_rel(lhs, k * y(z) * dy(z) / s2))
    return {"first": tuple(first), "second": tuple(second)}


def hermite_substitution(e):
    """Exact comparison of the (2,0,0,0) data with the classical formulas.

    With E = z, g2 = a/3, g3 = b/54: xi = -y/6, Q = (z^2-a)(8z^3-6az-b)/8,
    a(E) = 3z, and kappa^2 = -(4/9)(8z^3-6az-b)/(8(z^2-a)).
    """
    case = get_case((2, 0, 0, 0), e)
    g2, g3 = invariants(case.e)
    A, B = 3 * g2, 54 * g3
    z = Poly([0, 1])
    y = RatE(z * z * z * 2 - Poly([B]), (z * z - Poly([A])) * 3)
    r_lin = z * z - Poly([A])
    r_cub = z * z * z * 8 - z * (6 * A) - Poly([B])
    kap_sq = RatE(Poly([_lam(case.couplings)]) ** 2) * _theta_ratio(case) ** 2 * RatE(-case.Q)
    return {
        "xi": case.covering.xi == y * RatE(Poly([Fraction(-1, 6)])),
        "Q": case.Q * 8 == r_lin * r_cub,
        "a": case.xi.a == z * 3,
        "kappa_sq": kap_sq == RatE(r_cub * Fraction(-4, 72), r_lin),
        "a_param": A, "b_param": B,
    }


# --- monodromy by direct integration ---------------------------------------------------------

@dataclass(frozen=True)
class MonodromyResult:
    E: complex
    k: int
    multiplier_ode: complex
    multiplier_formula: complex
    residual: float
    det_residual: float
    eigenvalues: tuple = field(default=())


def _potential(C, L):
    ls = C.as_tuple()
    es = L.e
    d = [(es[k] - es[(k + 1) % 3]) * (es[k] - es[(k + 2) % 3]) for k in range(3)]

    def v(x):
        z = ell.wp(x, L)
        out = ls[0] * (ls[0] + 1) * z
        for k in range(3):
            if ls[k + 1]:
                out += ls[k + 1] * (ls[k + 1] + 1) * (es[k] + d[k] / (z - es[k]))
        return out
    return v


def _guard(C, L, x0, span, radius):
    ls = C.as_tuple()
    for i in range(4):
        if not ls[i]:
            continue
        for m in range(-2, 3):
            for n in range(-2, 3):
                p = L.omega(i) + 2 * m * L.omega1 + 2 * n * L.omega3
                t = np.clip(((p - x0) * np.conj(span)).real / abs(span) ** 2, 0, 1)
                if abs(x0 + t * span - p) < radius:
                    raise PoleOnPath(f"path passes within {radius:.3g} of the pole {p}")


def start_point(L, k, mode="midpoint"):
    """Start of the integration path for the period 2 omega_k.

    ``midpoint``: omega_j / 2 with j != k, so the segment stays half a period
    away from every pole.  ``offset``: eps * i * omega_k/|omega_k| with
    eps = 0.1 min(|omega_1|, |omega_3|), close to the pole at 0.
    """
    wk = L.omega(k)
    if mode == "offset":
        return 0.1 * min(abs(L.omega1), abs(L.omega3)) * 1j * wk / abs(wk)
    return L.omega(3 if k == 1 else 1) / 2


def transfer_matrix(C, L, E, k, rtol=1e-12, mode="midpoint"):
    """Transfer matrix of f'' = (v - E) f over x0 -> x0 + 2 omega_k."""
    span = 2 * L.omega(k)
    x0 = start_point(L, k, mode)
    _guard(C, L, x0, span, 0.05 * min(abs(L.omega1), abs(L.omega3)))
    v = _potential(C, L)
    E = complex(E)

    def rhs(s, y):
        q = v(x0 + s * span) - E
        return np.array([span * y[1], span * q * y[0], span * y[3], span * q * y[2]])

    sol = solve_ivp(rhs, (0.0, 1.0), np.array([1, 0, 0, 1], dtype=complex),
                    method="DOP853", rtol=rtol, atol=rtol * 1e-2)
    if not sol.success:
        raise StiffFailure(sol.message)
    f1, d1, f2, d2 = sol.y[:, -1]
    return np.array([[f1, f2], [d1, d2]])


def monodromy_check(C, e, E, k, rtol=1e-12, mode="midpoint") -> MonodromyResult:
    case = get_case(C, e)
    L = case.lattice
    M = transfer_matrix(case.couplings, L, E, k, rtol, mode)
    ev = np.linalg.eigvals(M)
    det = abs(np.linalg.det(M) - 1)
    try:
        cp = cover_point(case.xi, L, E)
        mu = complex(cp.multiplier(k, L))
    except Exception as exc:
        from .errors import AtBranchPoint
        if not isinstance(exc, AtBranchPoint):
            raise
        _, signs = degenerate_point(case.heun, E, tol=1e-6)
        mu = complex(signs[k - 1])
    dist = [abs(x - mu) / max(1.0, abs(mu)) for x in ev]
    j = int(np.argmin(dist))
    return MonodromyResult(complex(E), k, complex(ev[j]), mu, float(dist[j]), float(det),
                           tuple(complex(x) for x in ev))
