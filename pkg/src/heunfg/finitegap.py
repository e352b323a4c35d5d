"""Heun, twisted Heun and theta-twisted Heun polynomials.

Heun polynomials are characteristic polynomials of H = -d^2/dx^2 + v on the
finite invariant spaces.  The twisted families come from an ansatz with two
algebraic slots whose coefficients are fixed top-down by a triangular linear
system; the leftover equations constrain (E, auxiliary) and the auxiliary is
removed with resultants.

Every operator is written in z = wp(x) with d/dx = w d/dz, w^2 = 4 P(z),
P(z) = (z - e1)(z - e2)(z - e3).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import EliminationCollapse, InconsistentCovering
from .polyalg import (ONE, MPoly, Poly, RatE, char_poly, gcd_many, poly_gcd, resultant,
                      squarefree_part, strip_factor)
from .xi import Couplings, exact_branch_points, half_period_index, potential
from .zalg import ZRat, inv_linear, zp_add, zp_deriv, zp_linear, zp_mul, zp_scale, zp_shift

COORDS = {0: (0, 0), 1: (1, 0), 2: (1, 1), 3: (0, 1)}


def half_period_sum(i, j):
    """Index of omega_i + omega_j modulo the period lattice."""
    a, b = COORDS[i], COORDS[j]
    return half_period_index(a[0] + b[0], a[1] + b[1])


# --- z-form operator pieces ---------------------------------------------------

def _one(es, nv):
    return ZRat.poly([MPoly.const(1, nv)], es, nv)


def _cubic(es, nv):
    p = [MPoly.const(1, nv)]
    for e in es:
        p = zp_mul(p, zp_linear(e, nv))
    return ZRat.poly(p, es, nv)


def _log_derivative(halves, es, nv):
    """sum_k halves[k] / (z - e_k), the z-log-derivative of prod (z - e_k)^halves[k]."""
    out = ZRat.poly([], es, nv)
    for k in range(3):
        if halves[k]:
            out = out + inv_linear(es[k], k, es, nv) * Fraction(halves[k])
    return out


def _apply(f, rho, c2, c1, c0):
    """r^-1 (c2 d^2/dz^2 + c1 d/dz + c0)(r f) where rho = r'/r."""
    f1 = f.deriv()
    f2 = f1.deriv()
    return (c2 * (f2 + rho * f1 * 2 + (rho.deriv() + rho * rho) * f)
            + c1 * (f1 + rho * f) + c0 * f)


def gauge_potential(ls, es, nv=1):
    """Zero-order term of phi^-1 H phi with phi = prod (z - e_k)^(-l_k/2).

    Returned as ascending z-coefficients (MPoly constants in ``nv`` variables).
    """
    W = _cubic(es, nv) * 4
    rho = _log_derivative([Fraction(-l, 2) for l in ls[1:]], es, nv)
    c0 = potential(ls, es, nv) - (W * rho.deriv() + W.deriv() * rho * Fraction(1, 2) + W * rho * rho)
    return c0.as_poly()


# --- Heun polynomials ---------------------------------------------------------

@dataclass(frozen=True)
class InvariantSpace:
    alpha: tuple      # (alpha_0..alpha_3), alpha_i in {-l_i, l_i + 1}
    beta: tuple       # exponents of the basis wp_1^b1 wp_2^b2 wp_3^b3 wp^n
    dim: int
    index: int        # i with sum alpha_k omega_k = omega_i


def invariant_spaces(C):
    C = Couplings.of(C)
    l0, l1, l2, l3 = C.as_tuple()
    lo = lambda i: -C[i]
    hi = lambda i: C[i] + 1
    if C.l % 2 == 0:
        alphas = [(lo(0), lo(1), lo(2), lo(3)), (lo(0), lo(1), hi(2), hi(3)),
                  (lo(0), hi(1), lo(2), hi(3)), (lo(0), hi(1), hi(2), lo(3))]
    else:
        alphas = [(lo(0), lo(1), lo(2), hi(3)), (lo(0), lo(1), hi(2), lo(3)),
                  (lo(0), hi(1), lo(2), lo(3)), (hi(0), lo(1), lo(2), lo(3))]
    out = {}
    for al in alphas:
        half = Fraction(sum(al), 2)
        if half <= 0:
            beta = al
        elif half >= 2:
            beta = tuple(1 - a for a in al)
        else:
            beta = None
        dim = 0 if beta is None else 1 - sum(beta) // 2
        idx = half_period_index(al[1] + al[2], al[2] + al[3])
        out[idx] = InvariantSpace(al, beta, dim, idx)
    if sorted(out) != [0, 1, 2, 3]:
        raise AssertionError("invariant spaces do not separate the half periods")
    return out


def hamiltonian_matrix(C, e, space: InvariantSpace):
    """Matrix of H on the basis r(z) z^n, r = prod (z - e_k)^(beta_k/2)."""
    es = exact_branch_points(e)
    ls = Couplings.of(C).as_tuple()
    nv = 1
    W = _cubic(es, nv) * 4
    V = potential(ls, es, nv)
    rho = _log_derivative([Fraction(b, 2) for b in space.beta[1:]], es, nv)
    d = space.dim
    cols = []
    for n in range(d):
        zn = ZRat.poly([MPoly.const(0, nv)] * n + [MPoly.const(1, nv)], es, nv)
        img = _apply(zn, rho, -W, W.deriv() * Fraction(-1, 2), V).as_poly()
        if len(img) > d:
            raise AssertionError("space is not invariant")
        cols.append([img[k].constant_value() if k < len(img) else Fraction(0) for k in range(d)])
    return [[cols[c][r] for c in range(d)] for r in range(d)]


def heun_polys(C, e):
    spaces = invariant_spaces(C)
    out = []
    for i in range(4):
        sp = spaces[i]
        out.append(ONE if sp.dim == 0 else char_poly(hamiltonian_matrix(C, e, sp)))
    return tuple(out)


# --- top-down solution of a slot system --------------------------------------

def _is_unit(c: MPoly, unit_var):
    """c is a nonzero constant, or a constant times a power of unit_var."""
    if len(c.t) != 1:
        return False
    (k, v), = c.t.items()
    return all(x == 0 for i, x in enumerate(k) if i != unit_var)


def _unit_inverse(c: MPoly):
    (k, v), = c.t.items()
    return MPoly({tuple(-x for x in k): 1 / v}, c.n)


def _run(equations, vals, unit_var):
    used = set()
    progress = True
    while progress:
        progress = False
        for idx, eq in enumerate(equations):
            if idx in used:
                continue
            und = [u for u in eq if u not in vals]
            if not und:
                continue
            if len(und) != 1 or not _is_unit(eq[und[0]], unit_var):
                continue
            u = und[0]
            acc = MPoly(n=eq[u].n)
            for v, c in eq.items():
                if v != u:
                    acc = acc + c * vals[v]
            vals[u] = -(acc * _unit_inverse(eq[u]))
            used.add(idx)
            progress = True
    return used


def solve_top_down(unknowns, equations, norm, nv, a_var, unit_var=None):
    """Fix unknowns from equations with a single open unknown and unit pivot.

    ``equations`` are dicts unknown -> MPoly coefficient.  When the process
    stalls one unknown becomes the free parameter (variable ``a_var``).
    Returns (values, residual MPolys, free unknown or None).
    """
    base = {norm: MPoly.const(1, nv)}
    vals = dict(base)
    used = _run(equations, vals, unit_var)
    free = None
    if len(vals) < len(unknowns):
        for cand in [u for u in reversed(unknowns) if u not in vals]:
            trial = dict(vals)
            trial[cand] = MPoly.var(a_var, nv)
            used2 = _run(equations, trial, unit_var)
            if len(trial) == len(unknowns):
                vals, used, free = trial, used | used2, cand
                break
        else:
            raise EliminationCollapse("recursion does not determine the coefficients")
    residuals = []
    for idx, eq in enumerate(equations):
        if idx in used:
            continue
        acc = MPoly(n=nv)
        for v, c in eq.items():
            acc = acc + c * vals[v]
        if not acc.is_zero():
            residuals.append(acc)
    return vals, residuals, free


# --- elimination ----------------------------------------------------------------

def _clear_negative(p: MPoly, var):
    low = min((k[var] for k in p.t), default=0)
    if low >= 0:
        return p
    return p * MPoly({tuple(-low if i == var else 0 for i in range(p.n)): Fraction(1)}, p.n)


def _drop_free(residuals, a_var):
    """Eliminate a parameter entering affinely: keep A-free equations and 2x2 minors."""
    if not any(r.degree(a_var) > 0 for r in residuals):
        return residuals
    plain, pairs = [], []
    for r in residuals:
        cs = r.coeffs_in(a_var)
        if len(cs) > 2:
            raise AssertionError("free parameter enters nonlinearly")
        if len(cs) == 1:
            plain.append(r)
        else:
            pairs.append((cs[0], cs[1]))
    for (x1, y1), (x2, y2) in combinations(pairs, 2):
        m = x1 * y2 - x2 * y1
        if not m.is_zero():
            plain.append(m)
    return plain


def _primitive(p: Poly):
    return p.monic() if p.c else p


def eliminate(residuals, v_var, e_var, a_var, strip_at=(), strip_infinity=True, seed=0):
    """Polynomial in E vanishing on the projection of the residual variety.

    Solutions with the auxiliary at one of ``strip_at`` (or at infinity) are removed.
    """
    if not residuals:
        raise EliminationCollapse("no constraints left")
    eqs = _drop_free(residuals, a_var)
    if any(r.constant_value() not in (None, 0) for r in eqs):
        return ONE
    eqs = [r for r in eqs if not r.is_zero()]
    if not eqs:
        raise EliminationCollapse("constraints vanish identically")
    bivs = [_deflate(r.to_bivar(v_var, e_var), strip_at) for r in eqs]
    pure = [b.coeffs[0] for b in bivs if b.deg == 0]
    mixed = [b for b in bivs if b.deg > 0]
    cands = list(pure)
    if mixed:
        rng = random.Random(seed)
        mixed.sort(key=lambda b: (b.deg, b.deg_e()))
        if len(mixed) == 1:
            if not pure:
                raise EliminationCollapse("a single constraint leaves a curve")
        else:
            for f in mixed[:2]:
                others = [b for b in mixed if b is not f]
                for _ in range(2):
                    g = _combine(others, rng)
                    cands.append(resultant(f, g))
    R = gcd_many(cands)
    if not R.c:
        raise EliminationCollapse("resultants vanish identically")
    spurious = []
    for c in strip_at:
        spurious.append(gcd_many([b.at_aux(Poly([c])) for b in bivs]))
    if strip_infinity:
        spurious.append(gcd_many([b.coeffs[-1] for b in bivs]))
    for s in spurious:
        if s.c and s.deg > 0:
            R = strip_factor(R, s)
    return squarefree_part(R)


def _deflate(b, points):
    """Divide out every factor (v - c), c in points, that divides b identically."""
    from .polyalg import Bivar
    for c in points:
        while b.deg > 0 and not b.at_aux(Poly([c])).c:
            # synthetic division by (v - c) with Poly coefficients
            cs = b.coeffs
            q = [None] * (len(cs) - 1)
            carry = cs[-1]
            for k in range(len(cs) - 2, -1, -1):
                q[k] = carry
                carry = cs[k] + carry * c
            b = Bivar(q)
    return b


def _combine(bivs, rng):
    from .polyalg import Bivar
    n = max(b.deg for b in bivs) + 1
    acc = [Poly([]) for _ in range(n)]
    for b in bivs:
        r = rng.randint(1, 97)
        for k, c in enumerate(b.coeffs):
            acc[k] = acc[k] + c * r
    return Bivar(acc)


# --- twisted Heun polynomials -----------------------------------------------

K_VAR, E_VAR, A_VAR = 0, 1, 2


def _z_power(centre, j, es, nv):
    p = [MPoly.const(1, nv)]
    for _ in range(j):
        p = zp_mul(p, zp_linear(centre, nv))
    return ZRat.poly(p, es, nv)


def twisted_system(C, e, i):
    """Unknowns, equations and normalization for the twisted ansatz with alpha = omega_i."""
    C = Couplings.of(C)
    es = exact_branch_points(e)
    ls = C.as_tuple()
    l = C.l
    nv = 3
    K = MPoly.var(K_VAR, nv)
    E = MPoly.var(E_VAR, nv)
    if i == C.p:
        centre = es[1]
        s1, s2 = (0, 0, 0), (1, 1, 1)
        top1, top2 = l // 2, (l - 3) // 2 if l >= 3 else -1
        norm = ("a", top1) if l % 2 == 0 else ("b", top2)
    else:
        k = half_period_sum(i, C.p)
        centre = es[k - 1]
        s1 = tuple(1 if j == k - 1 else 0 for j in range(3))
        s2 = tuple(1 - x for x in s1)
        top1, top2 = (l - 1) // 2, (l - 2) // 2 if l >= 2 else -1
        norm = ("b", top2) if l % 2 == 0 else ("a", top1)
    unknowns = [("a", j) for j in range(top1 + 1)] + [("b", j) for j in range(top2 + 1)]
    if norm not in unknowns:
        return unknowns, [], None
    P = _cubic(es, nv)
    W = P * 4
    rho_phi = _log_derivative([Fraction(-x, 2) for x in ls[1:]], es, nv)
    c0 = ZRat.poly(gauge_potential(ls, es, nv), es, nv)
    second = -W
    first = W.deriv() * Fraction(-1, 2) - W * rho_phi * 2
    rho = {"a": _log_derivative([Fraction(x, 2) for x in s1], es, nv),
           "b": _log_derivative([Fraction(x, 2) for x in s2], es, nv)}
    q = {"a": ZRat.poly(_prod_linear(s1, es, nv), es, nv),
         "b": ZRat.poly(_prod_linear(s2, es, nv), es, nv)}
    images = {}
    for (slot, j) in unknowns:
        f = _z_power(centre, j, es, nv)
        same = _apply(f, rho[slot], second, first, c0 - K - E) * P
        # -2 kappa w (d/dz + rho_phi) carries slot a into slot b and back (w r_s = 2 q_s r_other)
        cross = (f.deriv() + (rho[slot] + rho_phi) * f) * q[slot] * P * (-4)
        if slot == "a":
            images[(slot, j)] = {"a": same, "b": cross}
        else:
            images[(slot, j)] = {"a": cross * K, "b": same}
    target = [0, 0, 0]
    for img in images.values():
        for zr in img.values():
            target = [max(a, b) for a, b in zip(target, zr.ex)]
    equations = {}
    for u, img in images.items():
        for slot, zr in img.items():
            coeffs = zp_shift(zr.cleared(tuple(target)), centre)
            for m, c in enumerate(coeffs):
                if not c.is_zero():
                    equations.setdefault((slot, m), {})[u] = c
    return unknowns, list(equations.values()), norm


def _prod_linear(sel, es, nv):
    p = [MPoly.const(1, nv)]
    for k in range(3):
        if sel[k]:
            p = zp_mul(p, zp_linear(es[k], nv))
    return p


def twisted_heun(C, e, i, H=None):
    C = Couplings.of(C)
    es = exact_branch_points(e)
    unknowns, equations, norm = twisted_system(C, es, i)
    if norm is None:
        return ONE
    _, residuals, _ = solve_top_down(unknowns, equations, norm, 3, A_VAR)
    R = eliminate(residuals, K_VAR, E_VAR, A_VAR, strip_at=(Fraction(0),))
    for h in (H if H is not None else heun_polys(C, es)):
        R = strip_factor(R, h)
    return R.monic()


# --- theta-twisted Heun polynomial -------------------------------------------
# Functions are pairs (f, g) meaning Phi0 f(z) + Phi0' g(z), Phi0 = Phi0(x, beta),
# with X = wp(beta), Y = wp'(beta); variables: 0 -> X - shift, 1 -> Y, 2 -> E, 3 -> A.

M_VAR, Y_VAR, TE_VAR, TA_VAR = 0, 1, 2, 3
TNV = 4


class _ThetaOps:
    def __init__(self, ls, es, p):
        nv = TNV
        self.es = es
        self.shift = Fraction(0) if p == 0 else es[p - 1]
        m = MPoly.var(M_VAR, nv)
        self.X = m + self.shift
        self.Y = MPoly.var(Y_VAR, nv)
        s2 = es[0] * es[1] + es[1] * es[2] + es[2] * es[0]
        self.S = [self.X * self.X + s2, self.X, MPoly.const(1, nv)]
        self.z = [MPoly.const(0, nv), MPoly.const(1, nv)]
        self.P = _prod_linear((1, 1, 1), es, nv)
        pl = []
        for k in range(3):
            if ls[k + 1]:
                rest = _prod_linear(tuple(0 if j == k else 1 for j in range(3)), es, nv)
                pl = zp_add(pl, zp_scale(rest, MPoly.const(ls[k + 1], nv)))
        self.PL = pl
        c0 = [MPoly.const(c.constant_value(), nv) for c in gauge_potential(ls, es, 1)]
        self.Pc0E = zp_mul(self.P, zp_add(c0, [-MPoly.var(TE_VAR, nv)]))
        if p == 0:
            self.den, self.num = MPoly.const(1, nv), MPoly(n=nv)
        else:
            self.den, self.num = m * 2, self.Y
        self.PX = (self.X - es[0]) * (self.X - es[1]) * (self.X - es[2]) * 4

    def D(self, F):
        f, g = F
        X, Y = self.X, self.Y
        two_zmX = [X * -2, MPoly.const(2, TNV)]
        return (zp_add(zp_add(zp_scale(zp_deriv(f), -Y), zp_mul([X, MPoly.const(2, TNV)], g)),
                       zp_scale(zp_mul(self.S, zp_deriv(g)), MPoly.const(2, TNV))),
                zp_add(zp_add(f, zp_mul(two_zmX, zp_deriv(f))), zp_scale(zp_deriv(g), Y)))

    def wmul(self, F):
        f, g = F
        X, Y = self.X, self.Y
        two_zmX = [X * -2, MPoly.const(2, TNV)]
        return (zp_add(zp_scale(f, -Y), zp_scale(zp_mul(self.S, g), MPoly.const(2, TNV))),
                zp_add(zp_mul(two_zmX, f), zp_scale(g, Y)))

    def T(self, F):
        """den^2 P (H_mu - E) F with mu = num/den."""
        dn, nm = self.den, self.num
        DF = self.D(F)
        DDF = self.D(DF)
        inner = _pair_add(_pair_scale(DDF, dn * dn), _pair_scale(DF, dn * nm * 2), _pair_scale(F, nm * nm))
        out = _pair_scale(_pair_mul(inner, self.P), MPoly.const(-1, TNV))
        drift = _pair_add(_pair_scale(DF, dn * dn), _pair_scale(F, dn * nm))
        out = _pair_add(out, _pair_mul(self.wmul(drift), self.PL))
        out = _pair_add(out, _pair_scale(_pair_mul(F, self.Pc0E), dn * dn))
        return out

    def reduce_y(self, p: MPoly):
        out = MPoly(n=TNV)
        powers = [MPoly.const(1, TNV)]
        for k, v in p.t.items():
            q, r = divmod(k[Y_VAR], 2)
            while len(powers) <= q:
                powers.append(powers[-1] * self.PX)
            kk = list(k)
            kk[Y_VAR] = r
            out = out + MPoly({tuple(kk): v}, TNV) * powers[q]
        return out


def _pair_add(*Fs):
    f, g = [], []
    for a, b in Fs:
        f, g = zp_add(f, a), zp_add(g, b)
    return f, g


def _pair_scale(F, s):
    return zp_scale(F[0], s), zp_scale(F[1], s)


def _pair_mul(F, poly):
    return zp_mul(F[0], poly), zp_mul(F[1], poly)


def theta_system(C, e):
    C = Couplings.of(C)
    es = exact_branch_points(e)
    l = C.l
    ops = _ThetaOps(C.as_tuple(), es, C.p)
    centre = es[1]
    topc, topd = (l - 1) // 2, (l - 2) // 2 if l >= 2 else -1
    unknowns = [("c", j) for j in range(topc + 1)] + [("d", j) for j in range(topd + 1)]
    norm = ("d", topd) if l % 2 == 0 else ("c", topc)
    if norm not in unknowns:
        return ops, unknowns, [], None
    equations = {}
    for (slot, j) in unknowns:
        u = [MPoly.const(1, TNV)]
        for _ in range(j):
            u = zp_mul(u, zp_linear(centre, TNV))
        F = (u, []) if slot == "c" else ([], zp_scale(u, ops.Y))
        f, g = ops.T(F)
        f = [ops.reduce_y(c) for c in f]
        g = [ops.reduce_y(c).divide_var(Y_VAR) for c in g]
        for out_slot, poly in (("c", f), ("d", g)):
            for m, c in enumerate(zp_shift(poly, centre)):
                if not c.is_zero():
                    if c.degree(Y_VAR) > 0:
                        raise AssertionError("odd parity survived")
                    equations.setdefault((out_slot, m), {})[(slot, j)] = c
    return ops, unknowns, list(equations.values()), norm


def theta_twisted_heun(C, e):
    C = Couplings.of(C)
    es = exact_branch_points(e)
    ops, unknowns, equations, norm = theta_system(C, es)
    if norm is None:
        return ONE
    unit = M_VAR if C.p != 0 else None
    _, residuals, _ = solve_top_down(unknowns, equations, norm, TNV, TA_VAR, unit_var=unit)
    residuals = [_clear_negative(r, M_VAR) for r in residuals]
    strip = tuple(ek - ops.shift for ek in es)
    try:
        R = eliminate(residuals, M_VAR, TE_VAR, TA_VAR, strip_at=strip)
    except EliminationCollapse:
        if C.s == 2:
            # kappa vanishes identically; the covering formula carries the factor 1 - 2/s = 0
            return ONE
        raise
    return R.monic()


# --- assembled data ----------------------------------------------------------------

@dataclass(frozen=True)
class HeunSet:
    couplings: Couplings
    e: tuple
    H: tuple
    Ht: tuple
    Htheta: Poly

    def to_json(self):
        return {"H": [h.to_json() for h in self.H], "Ht": [h.to_json() for h in self.Ht],
                "Htheta": self.Htheta.to_json()}


def descending_image(C, e):
    """(C', e', idx): a relabelling with l0 >= l1 >= l2 >= l3 describing the same operator.

    Half-period shifts and period relabellings together permute the couplings
    as S4.  Eigenvalues with alpha = omega_i for C are those with
    alpha = omega_idx[i] for C'.
    """
    from .xi import SYMMETRIES
    start = (Couplings.of(C), exact_branch_points(e), (0, 1, 2, 3))
    seen, queue = {start[0].as_tuple()}, [start]
    while queue:
        cur, es, idx = queue.pop(0)
        ls = cur.as_tuple()
        if list(ls) == sorted(ls, reverse=True):
            return cur, es, idx
        for lp, ep in SYMMETRIES.values():
            nxt = Couplings(*[ls[i] for i in lp])
            if nxt.as_tuple() in seen:
                continue
            seen.add(nxt.as_tuple())
            relabel = {0: 0, **{ep[j] + 1: j + 1 for j in range(3)}}
            queue.append((nxt, tuple(es[i] for i in ep), tuple(relabel[i] for i in idx)))
    raise AssertionError("no descending relabelling")


def _forms(C, es, H, Ht):
    s = C.s
    den = H[0] * Ht[0] * Ht[0] * (s * s)
    return [RatE(H[k] * Ht[k] * Ht[k] * (-4), den) + RatE(Poly([es[k - 1]])) for k in (1, 2, 3)]


def poly_sqrt(p: Poly):
    """Exact square root of a polynomial with a square leading coefficient, or None."""
    if p.is_zero():
        return p
    if p.deg % 2:
        return None
    lead = p.lc
    if lead < 0:
        return None
    r = Fraction(math.isqrt(lead.numerator), math.isqrt(lead.denominator))
    if r * r != lead:
        return None
    n = p.deg // 2
    q = [Fraction(0)] * (n + 1)
    q[n] = r
    for k in range(n - 1, -1, -1):
        # coefficient of E^(n+k) in q^2 fixes q[k]
        acc = sum(q[i] * q[n + k - i] for i in range(k + 1, n + 1) if n + k - i <= n and n + k - i > k)
        q[k] = (p.coeff(n + k) - acc) / (2 * r)
    out = Poly(q)
    return out if out * out == p else None


def _restore_shared(C, es, H, Ht):
    """Repair a twisted polynomial that shares roots with its Heun polynomial.

    Stripping Heun factors is right when root sets are disjoint, which fails for
    a few coupling patterns.  If exactly two of the three forms of wp(alpha)
    agree, the third Ht is recomputed from them by an exact square root.
    """
    forms = _forms(C, es, H, Ht)
    if forms[0] == forms[1] == forms[2]:
        return tuple(Ht)
    for bad in range(3):
        a, b = [k for k in range(3) if k != bad]
        if forms[a] != forms[b] or H[bad + 1].is_zero():
            continue
        sq = (RatE(Poly([es[bad]])) - forms[a]) * RatE(H[0] * Ht[0] * Ht[0] * (C.s * C.s), H[bad + 1] * 4)
        root = poly_sqrt(sq.num) if sq.den == ONE else None
        if root is not None:
            out = list(Ht)
            out[bad + 1] = root.monic()
            return tuple(out)
    raise InconsistentCovering("twisted Heun polynomials do not give one wp(alpha)")


def heun_set(C, e) -> HeunSet:
    """H by characteristic polynomials; Ht and Htheta on the descending relabelling."""
    C = Couplings.of(C)
    es = exact_branch_points(e)
    H = heun_polys(C, es)
    C2, es2, idx = descending_image(C, es)
    if C2 == C and es2 == es:
        Ht = _restore_shared(C, es, H, [twisted_heun(C, es, i, H) for i in range(4)])
        return HeunSet(C, es, H, Ht, theta_twisted_heun(C, es))
    other = heun_set(C2, es2)
    if any(H[i] != other.H[idx[i]] for i in range(4)):
        raise InconsistentCovering("relabelled Heun polynomials disagree")
    return HeunSet(C, es, H, tuple(other.Ht[idx[i]] for i in range(4)), other.Htheta)


@dataclass(frozen=True)
class Covering:
    xi: RatE                  # wp(alpha) as a rational function of E
    xi_k: tuple               # the three k-forms, all equal to xi
    kappa_sq_ratio: RatE      # kappa^2 / (-Q(E))


def covering_map(HS: HeunSet, C=None) -> Covering:
    C = Couplings.of(C if C is not None else HS.couplings)
    s = C.s
    den = HS.H[0] * HS.Ht[0] * HS.Ht[0] * (s * s)
    forms = []
    for k in range(1, 4):
        num = HS.H[k] * HS.Ht[k] * HS.Ht[k] * (-4)
        forms.append(RatE(num, den) + RatE(Poly([HS.e[k - 1]])))
    if not (forms[0] == forms[1] == forms[2]):
        raise InconsistentCovering("the three forms of wp(alpha) disagree")
    lam = Fraction(s - 2, s)
    kap = RatE(HS.Htheta * lam, HS.H[0] * HS.Ht[0]) ** 2
    return Covering(forms[0], tuple(forms), kap)


def structural_report(HS: HeunSet, Q: Poly, genus: int):
    """Exact checks of the product, degree and disjointness laws."""
    from .polyalg import resultant_univariate
    prod = ONE
    for h in HS.H:
        prod = prod * h
    d0 = HS.H[0].deg + 2 * HS.Ht[0].deg
    fams = list(HS.H) + list(HS.Ht)
    disjoint = all(resultant_univariate(a, b) != 0
                   for a, b in combinations([f for f in fams if f.deg > 0], 2))
    return {
        "product_is_Q": prod == Q,
        "deg_Q": Q.deg == 2 * genus + 1,
        "degree_law": all(HS.H[k].deg + 2 * HS.Ht[k].deg == d0 + 1 for k in range(1, 4)),
        # with s = 2 kappa vanishes identically and Htheta is the constant 1
        "theta_degree_law": (HS.Htheta.deg == HS.H[0].deg + HS.Ht[0].deg - genus
                             or (HS.couplings.s == 2 and HS.Htheta == ONE)),
        "disjoint": disjoint,
    }
