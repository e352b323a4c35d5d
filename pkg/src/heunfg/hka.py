"""Numeric Bloch data (alpha, kappa) read off the zeros of Xi.

For a regular E, Xi(x, E) * prod (z - e_k)^l_k = b(E) prod (z - z_j) in z = wp(x).
Each root z_j lifts to t_j with wp'(t_j) = -2 nu / Xi_z(z_j), nu = sqrt(-Q(E)),
and alpha, kappa follow from the t_j and the pole positions.

Branch convention for nu: principal (positive) at a large negative real
basepoint, continued along base -> base + i*h*sgn -> E (sgn = sign of Im E,
upper half plane for real E).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import elliptic as ell
from .errors import AtBranchPoint, BranchLost, CollidingRoots, Unclassified
from .polyalg import Poly, roots_numeric
from .xi import XiData, build_Q, xi_as_zrat


# --- square-root continuation -----------------------------------------------------

def continue_sqrt(f, path, s0=None, max_ratio=0.5, max_depth=40):
    """Continue sqrt(f) along a polyline; returns the value at the last vertex.

    ``s0`` is the branch at path[0] (principal root if omitted).  Segments are
    halved until the relative change of f per step is below ``max_ratio``.
    """
    a = complex(path[0])
    fa = complex(f(a))
    s = np.sqrt(fa) if s0 is None else complex(s0)
    for b in path[1:]:
        fa, s = _walk(f, a, complex(b), fa, s, 0, max_ratio, max_depth)
        a = complex(b)
    return s


def _walk(f, a, b, fa, sa, depth, max_ratio, max_depth):
    fb = complex(f(b))
    if abs(fb - fa) > max_ratio * max(abs(fa), abs(fb)):
        if depth >= max_depth:
            raise BranchLost(f"cannot resolve the square-root branch near {b}")
        m = (a + b) / 2
        fm, sm = _walk(f, a, m, fa, sa, depth + 1, max_ratio, max_depth)
        return _walk(f, m, b, fm, sm, depth + 1, max_ratio, max_depth)
    r = np.sqrt(fb)
    return fb, (r if abs(r - sa) <= abs(r + sa) else -r)


def nu_path(E, base):
    E = complex(E)
    h = max(1.0, abs(E), abs(base))
    sgn = -1.0 if E.imag < 0 else 1.0
    return [complex(base), complex(base, sgn * h), E]


# --- prepared data per (Xi, lattice) ---------------------------------------------

@dataclass(frozen=True)
class _Prepared:
    X: XiData
    Q: Poly
    numer: tuple          # coefficients (ascending in z) of the cleared numerator, Polys in E
    base: float           # basepoint for nu
    lat: ell.Lattice = field(repr=False)

    def nu(self, E):
        return continue_sqrt(lambda t: -self.Q(t), nu_path(E, self.base))


@lru_cache(maxsize=256)
def prepare(X: XiData, L: ell.Lattice) -> _Prepared:
    Q = build_Q(X).Q
    ls = X.couplings.as_tuple()
    num = xi_as_zrat(X).cleared((ls[1], ls[2], ls[3]))
    numer = tuple(c.to_poly(0) for c in num)
    roots = roots_numeric(Q) if Q.deg > 0 else []
    rmax = max([abs(complex(r)) for r in roots], default=1.0)
    base = -(10.0 + 4.0 * rmax)
    return _Prepared(X, Q, numer, base, L)


# --- cover points -----------------------------------------------------------------

@dataclass(frozen=True)
class CoverPoint:
    E: complex
    sqrtQ: complex        # nu = sqrt(-Q(E)) on the tracked branch
    zj: tuple
    tj: tuple
    alpha: complex        # fundamental-cell representative
    kappa: complex
    wp_alpha: complex
    wp_prime_alpha: complex
    zeta_alpha: complex

    def multiplier(self, k, L):
        """exp(-2 eta_k alpha + 2 omega_k zeta(alpha) + 2 kappa omega_k)."""
        w, eta = L.omega(k), L.eta_k(k)
        return np.exp(-2 * eta * self.alpha + 2 * w * self.zeta_alpha + 2 * self.kappa * w)

    def to_json(self):
        def c(z):
            return [float(np.real(z)), float(np.imag(z))]
        return {"E": c(self.E), "alpha": c(self.alpha), "kappa": c(self.kappa),
                "wp_alpha": c(self.wp_alpha), "wp_prime_alpha": c(self.wp_prime_alpha)}


def _polish(coeffs, z, steps=3):
    p = np.poly1d(coeffs[::-1])
    dp = p.deriv()
    for _ in range(steps):
        d = dp(z)
        if d == 0:
            break
        z = z - p(z) / d
    return z


def cover_point(X: XiData, L: ell.Lattice, E, nu=None, tol=1e-10) -> CoverPoint:
    P = prepare(X, L)
    E = complex(E)
    qv = complex(P.Q(E))
    scale = max(1.0, abs(E)) ** max(P.Q.deg, 1)
    if abs(qv) < tol * scale:
        raise AtBranchPoint(f"Q(E) vanishes at E = {E}")
    nu = P.nu(E) if nu is None else complex(nu)
    ls = X.couplings.as_tuple()
    es = L.e
    coeffs = np.array([complex(c(E)) for c in P.numer])
    lead = coeffs[-1]
    zs = np.roots(coeffs[::-1]) if len(coeffs) > 1 else np.array([])
    zs = np.array([_polish(coeffs, z) for z in zs])
    sep = min((abs(a - b) for i, a in enumerate(zs) for b in zs[i + 1:]), default=np.inf)
    if sep < 1e-9 * max(1.0, np.max(np.abs(zs), initial=1.0)):
        raise CollidingRoots(f"numerator roots collide at E = {E}")
    tj = []
    for j, z in enumerate(zs):
        others = np.prod([z - w for i, w in enumerate(zs) if i != j])
        den = np.prod([(z - es[k]) ** ls[k + 1] for k in range(3)])
        xi_z = lead * others / den
        tj.append(ell.wp_inverse(z, -2 * nu / xi_z, L))
    # f = prod sigma(x - s_j) / prod sigma(x - omega_i)^l_i * exp(c x) with s_j = -t_j.
    # f'' = 0 at each zero fixes c; summing those conditions over j leaves
    # c = (1/l) sum_j sum_i l_i zeta(s_j - omega_i), and kappa = c - zeta(alpha).
    half = sum(ls[k] * L.omega(k) for k in range(1, 4))
    alpha_raw = -sum(tj) - half
    c = -sum(ls[i] * ell.zeta(t + L.omega(i), L)
             for t in tj for i in range(4) if ls[i]) / sum(ls)
    kappa = c - ell.zeta(alpha_raw, L)
    alpha = complex(ell._reduce(alpha_raw, L)[0])
    return CoverPoint(E, nu, tuple(complex(z) for z in zs), tuple(tj), alpha, complex(kappa),
                      ell.wp(alpha, L), ell.wp_prime(alpha, L), ell.zeta(alpha, L))


# --- validation against the closed-form covering ------------------------------------

@dataclass(frozen=True)
class CoveringReport:
    E: complex
    wp_residual: float
    kappa_sq_residual: float
    kappa_residual: float      # signed form kappa = (1-2/s) Htheta/(H0 Ht0) nu
    ok: bool


def validate_covering(CP: CoverPoint, HS, C=None, rtol=1e-8) -> CoveringReport:
    from .finitegap import covering_map
    cov = covering_map(HS, C)
    E = CP.E
    xi = complex(cov.xi(E))
    wp_res = abs(CP.wp_alpha - xi) / max(1.0, abs(xi))
    s = HS.couplings.s
    lam = 1 - Fraction(2, s)
    ratio = complex(HS.Htheta(E)) / complex((HS.H[0] * HS.Ht[0])(E))
    kap_formula = float(lam) * ratio * CP.sqrtQ
    k_scale = max(1.0, abs(kap_formula) ** 2, abs(CP.kappa) ** 2)
    ksq_res = abs(CP.kappa ** 2 - kap_formula ** 2) / k_scale
    k_res = abs(CP.kappa - kap_formula) / max(1.0, abs(kap_formula))
    return CoveringReport(E, wp_res, ksq_res, k_res, wp_res < rtol and ksq_res < rtol)


# --- Q(E) = 0 ------------------------------------------------------------------------

def half_period_multipliers(i):
    """Periodicity signs (k = 1, 2, 3) of the eigenfunction when alpha = omega_i."""
    return tuple(1 if (i == 0 or k == i) else -1 for k in (1, 2, 3))


def degenerate_point(HS, E0, tol=1e-8):
    """(i, multipliers) for a band edge E0 in A_i (a zero of H^(i))."""
    E0 = complex(E0)
    best, which = np.inf, None
    for i, h in enumerate(HS.H):
        if h.deg <= 0:
            continue
        d = min(abs(complex(r) - E0) for r in roots_numeric(h))
        if d < best:
            best, which = d, i
    if which is None or best > tol * max(1.0, abs(E0)):
        raise Unclassified(f"{E0} is not a zero of any Heun polynomial")
    return which, half_period_multipliers(which)
