"""The doubly periodic product solution Xi(x, E) and the spectral data Q, a, c.

Xi solves Xi''' - 4(v - E) Xi' - 2 v' Xi = 0 with
v = sum_i l_i(l_i+1) wp(x + omega_i).  In the variable z = wp(x) every even
elliptic function with poles at half periods is a rational function of z,
using wp(x + omega_k) = e_k + d_k/(z - e_k), d_k = (e_k - e_k')(e_k - e_k'').
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import NotConstant
from .polyalg import MPoly, Poly, kernel_poly
from .zalg import ZRat, zp_linear, zp_mul


@dataclass(frozen=True)
class Couplings:
    l0: int
    l1: int
    l2: int
    l3: int

    def __post_init__(self):
        ls = self.as_tuple()
        if any(x < 0 for x in ls):
            raise ValueError("couplings must be nonnegative")
        if not any(ls):
            raise ValueError("couplings (0,0,0,0) are excluded")

    @classmethod
    def of(cls, ls):
        return ls if isinstance(ls, Couplings) else cls(*[int(x) for x in ls])

    def as_tuple(self):
        return (self.l0, self.l1, self.l2, self.l3)

    def __getitem__(self, i):
        return self.as_tuple()[i]

    @property
    def l(self):
        return sum(self.as_tuple())

    @property
    def s(self):
        return sum(x * (x + 1) for x in self.as_tuple())

    @property
    def parity(self):
        return self.l % 2

    @property
    def p(self):
        """Index with l1*w1 + l2*w2 + l3*w3 = w_p modulo the period lattice."""
        return half_period_index(self.l1 + self.l2, self.l2 + self.l3)

    def __str__(self):
        return ",".join(str(x) for x in self.as_tuple())


def half_period_index(a, b):
    """Index of a*w1 + b*w3 modulo 2w1 Z + 2w3 Z (w2 = -w1 - w3)."""
    return {(0, 0): 0, (1, 0): 1, (1, 1): 2, (0, 1): 3}[(a % 2, b % 2)]


def exact_branch_points(e):
    es = tuple(Fraction(x) for x in e)
    if sum(es) != 0 or len(set(es)) != 3:
        raise ValueError("branch points must be distinct and sum to zero")
    return es


def invariants(es):
    e1, e2, e3 = es
    return -4 * (e1 * e2 + e2 * e3 + e3 * e1), 4 * e1 * e2 * e3


def shift_numerators(es):
    """d_k = (e_k - e_k')(e_k - e_k'')."""
    return tuple((es[k] - es[(k + 1) % 3]) * (es[k] - es[(k + 2) % 3]) for k in range(3))


@dataclass(frozen=True)
class XiData:
    couplings: Couplings
    e: tuple
    c0: Poly
    b: tuple          # b[i][j] multiplies wp(x + w_i)^(l_i - j)
    a_deriv: tuple    # a_deriv[i][m] multiplies (d/dx)^(2m) wp(x + w_i)
    c: Poly
    a: Poly

    @property
    def genus(self):
        return self.c0.deg

    def unknowns(self):
        out = [self.c0]
        for bi in self.b:
            out.extend(bi)
        return out


@dataclass(frozen=True)
class SpectralCurve:
    Q: Poly
    genus: int


# --- z-form building blocks ---------------------------------------------------

NV = 1  # the only ring variable here is E


def _shifted_wp(k, es, nv=NV):
    """wp(x + omega_k) as a ZRat in z (k = 0..3)."""
    if k == 0:
        return ZRat.poly([MPoly.const(0, nv), MPoly.const(1, nv)], es, nv)
    d = shift_numerators(es)[k - 1]
    e = es[k - 1]
    ex = [0, 0, 0]
    ex[k - 1] = 1
    return ZRat([MPoly.const(d - e * e, nv), MPoly.const(e, nv)], ex, es, nv)


def potential(ls, es, nv=NV):
    out = ZRat.poly([], es, nv)
    for i in range(4):
        if ls[i]:
            out = out + _shifted_wp(i, es, nv) * (ls[i] * (ls[i] + 1))
    return out


def curve_poly(es, nv=NV):
    """W(z) = 4 prod (z - e_k) as a polynomial ZRat."""
    w = [MPoly.const(4, nv)]
    for e in es:
        w = zp_mul(w, zp_linear(e, nv))
    return ZRat.poly(w, es, nv)


def _power(f, m):
    out = ZRat.poly([MPoly.const(1, f.nv)], f.es, f.nv)
    for _ in range(m):
        out = out * f
    return out


def basis_functions(ls, es, nv=NV):
    """The ansatz basis: 1, then wp(x + w_i)^(l_i - j) for each i, j < l_i."""
    funcs = [ZRat.poly([MPoly.const(1, nv)], es, nv)]
    for i in range(4):
        base = _shifted_wp(i, es, nv)
        for j in range(ls[i]):
            funcs.append(_power(base, ls[i] - j))
    return funcs


def _operator(phi, V, W, E):
    d1 = phi.deriv()
    d2 = d1.deriv()
    d3 = d2.deriv()
    Wp = W.deriv()
    Wpp = Wp.deriv()
    return (W * d3 + Wp * d2 * Fraction(3, 2) + Wpp * d1 * Fraction(1, 2)
            - V * d1 * 4 - V.deriv() * phi * 2 + d1 * (E * 4))


def build_xi(C, e) -> XiData:
    C = Couplings.of(C)
    if C.l > 12:
        raise NotImplementedError("couplings beyond the registry bound l <= 12")
    es = exact_branch_points(e)
    ls = C.as_tuple()
    V = potential(ls, es)
    W = curve_poly(es)
    E = MPoly.var(0, NV)
    funcs = basis_functions(ls, es)
    images = [_operator(phi, V, W, E) for phi in funcs]
    ex_all = tuple(max(img.ex[k] for img in images) for k in range(3))
    cols = [img.cleared(ex_all) for img in images]
    nrows = max(len(c) for c in cols)
    M = []
    for r in range(nrows):
        row = [c[r].to_poly(0) if r < len(c) else Poly([]) for c in cols]
        if any(x.c for x in row):
            M.append(row)
    vec = kernel_poly(M, monic_index=0)
    c0 = vec[0]
    b, pos = [], 1
    for i in range(4):
        b.append(tuple(vec[pos:pos + ls[i]]))
        pos += ls[i]
    a_deriv, c, a = derivative_basis(ls, es, c0, b)
    return XiData(C, es, c0, tuple(b), a_deriv, c, a)


@lru_cache(maxsize=None)
def _power_to_derivatives(n, g2, g3):
    """wp^n = sum_m alpha[m] wp^(2m) + gamma, as exact rationals."""
    # derivative polynomials in wp: d_0 = wp, d_{m+1} = D^2 d_m
    dpolys = [Poly([0, 1], "w")]
    curve = Poly([-g3, -g2, 0, 4], "w")
    second = Poly([-g2 / 2, 0, 6], "w")
    for _ in range(1, n):
        f = dpolys[-1]
        dpolys.append(f.deriv().deriv() * curve + f.deriv() * second)
    target = Poly([0] * n + [1], "w")
    alpha = [Fraction(0)] * n
    for m in range(n - 1, -1, -1):
        coef = target.coeff(m + 1) / dpolys[m].coeff(m + 1)
        alpha[m] = coef
        target = target - dpolys[m] * coef
    if target.deg > 0:
        raise ArithmeticError("power-to-derivative conversion failed")
    return tuple(alpha), target.coeff(0)


def derivative_basis(ls, es, c0, b):
    g2, g3 = invariants(es)
    a_deriv = []
    c = c0
    for i in range(4):
        coeffs = [Poly([]) for _ in range(ls[i])]
        for j, bij in enumerate(b[i]):
            alpha, gamma = _power_to_derivatives(ls[i] - j, g2, g3)
            for m, al in enumerate(alpha):
                coeffs[m] = coeffs[m] + bij * al
            c = c + bij * gamma
        a_deriv.append(tuple(coeffs))
    a = Poly([])
    for i in range(4):
        if ls[i]:
            a = a + a_deriv[i][0]
    return tuple(a_deriv), c, a


def xi_as_zrat(X: XiData, nv=NV):
    """Xi as a ZRat whose coefficients are polynomials in E (variable 0)."""
    es = X.e
    ls = X.couplings.as_tuple()
    funcs = basis_functions(ls, es, nv)
    out = ZRat.poly([], es, nv)
    for coef, phi in zip(X.unknowns(), funcs):
        out = out + phi * _mpoly_of(coef, nv)
    return out


def _mpoly_of(p: Poly, nv=NV):
    return MPoly({(k,) + (0,) * (nv - 1): v for k, v in enumerate(p.c)}, nv)


def build_Q(X: XiData, C=None, e=None) -> SpectralCurve:
    es = X.e
    ls = X.couplings.as_tuple()
    R = xi_as_zrat(X)
    R1 = R.deriv()
    R2 = R1.deriv()
    V = potential(ls, es)
    W = curve_poly(es)
    Wp = W.deriv()
    E = MPoly.var(0, NV)
    vals = []
    samples = [z for z in (Fraction(7, 3), Fraction(-11, 5), Fraction(13, 7), Fraction(-17, 11),
                           Fraction(19, 13)) if z not in es][:2]
    for z in samples:
        r, r1, r2 = R.at(z), R1.at(z), R2.at(z)
        v, w, wp_ = V.at(z), W.at(z), Wp.at(z)
        q = r * r * (E - v) + r * (wp_ * r1 * Fraction(1, 2) + w * r2) * Fraction(1, 2) \
            - w * r1 * r1 * Fraction(1, 4)
        vals.append(q.to_poly(0))
    if vals[0] != vals[1]:
        raise NotConstant("Q(E) depends on z")
    Q = vals[0]
    return SpectralCurve(Q, X.genus)


def monodromy_integrands(X: XiData):
    return X.a, X.c


# --- symmetries ---------------------------------------------------------------

# name -> (coupling permutation, branch point permutation); new[k] = old[perm[k]]
SYMMETRIES = {
    "identity": ((0, 1, 2, 3), (0, 1, 2)),
    "shift_w1": ((1, 0, 3, 2), (0, 1, 2)),
    "shift_w2": ((2, 3, 0, 1), (0, 1, 2)),
    "shift_w3": ((3, 2, 1, 0), (0, 1, 2)),
    "periods_w1_w2": ((0, 1, 3, 2), (0, 2, 1)),
    "periods_w3_w1": ((0, 3, 2, 1), (2, 1, 0)),
    "periods_w2_w3": ((0, 2, 1, 3), (1, 0, 2)),
}


def symmetry_transport(C, perm: str, e=None):
    """Transformed couplings (and branch points) under which Q, a, c, xi, kappa agree."""
    C = Couplings.of(C)
    lp, ep = SYMMETRIES[perm]
    newC = Couplings(*[C[i] for i in lp])
    if e is None:
        return newC, ep
    return newC, tuple(Fraction(e[i]) for i in ep)


def evaluate_xi(X: XiData, x, E, L):
    """Numeric Xi(x, E) through the elliptic kernel (x may be an array)."""
    from . import elliptic as ell
    import numpy as np
    x = np.asarray(x, dtype=complex)
    val = complex(X.c0(E))
    out = np.full(x.shape, val, dtype=complex)
    for i in range(4):
        if not X.b[i]:
            continue
        w = ell.wp(x + L.omega(i), L)
        for j, bij in enumerate(X.b[i]):
            out = out + complex(bij(E)) * w ** (len(X.b[i]) - j)
    return out
