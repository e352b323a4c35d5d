"""Univariate and multivariate polynomials over the rationals (or complex floats).

Exact coefficients are ``fractions.Fraction``; numeric ones are ``complex``.
The two modes never mix silently: combining them raises ``TypeError``.
"""
from __future__ import annotations

import json
from fractions import Fraction
from functools import reduce
from numbers import Rational

import numpy as np

from .errors import KernelDimError

EXACT = "exact"
NUMERIC = "numeric"


def _coerce(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)) and not isinstance(c, bool):
        return Fraction(c)
    if isinstance(c, (float, complex, np.floating, np.complexfloating)):
        return complex(c)
    raise TypeError(f"unsupported coefficient {c!r}")


def _mode_of(c):
    return EXACT if isinstance(c, Fraction) else NUMERIC


class Poly:
    """Dense univariate polynomial, coefficients in ascending degree."""

    __slots__ = ("c", "var")

    def __init__(self, coeffs=(), var="E"):
        cs = [_coerce(x) for x in coeffs]
        modes = {_mode_of(x) for x in cs}
        if len(modes) > 1:
            raise TypeError("mixed exact and numeric coefficients")
        while cs and cs[-1] == 0:
            cs.pop()
        self.c = tuple(cs)
        self.var = var

    # construction helpers
    @classmethod
    def const(cls, a, var="E"):
        return cls([a], var)

    @classmethod
    def gen(cls, var="E"):
        return cls([0, 1], var)

    @classmethod
    def from_roots(cls, roots, var="E"):
        p = cls([1], var)
        for r in roots:
            p = p * cls([-r, 1], var)
        return p

    @property
    def mode(self):
        if not self.c:
            return EXACT
        return _mode_of(self.c[0])

    @property
    def deg(self):
        return len(self.c) - 1

    def degree(self):
        return len(self.c) - 1

    @property
    def lc(self):
        return self.c[-1] if self.c else Fraction(0)

    def is_zero(self):
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def coeff(self, k):
        return self.c[k] if 0 <= k < len(self.c) else Fraction(0)

    def _wrap(self, other):
        if isinstance(other, Poly):
            return other
        return Poly([other], self.var)

    def _check(self, other):
        if self.c and other.c and self.mode != other.mode:
            raise TypeError("mixed exact and numeric polynomials")

    def __add__(self, other):
        other = self._wrap(other)
        self._check(other)
        n = max(len(self.c), len(other.c))
        zero = Fraction(0)
        return Poly([self.coeff(k) + other.coeff(k) if k < n else zero
                     for k in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-a for a in self.c], self.var)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            a = _coerce(other)
            if self.c and _mode_of(a) != self.mode:
                raise TypeError("mixed exact and numeric polynomials")
            return Poly([a * x for x in self.c], self.var)
        self._check(other)
        if not self.c or not other.c:
            return Poly([], self.var)
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(other.c):
                out[i + j] += a * b
        return Poly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = Poly([1], self.var) if self.mode == EXACT else Poly([1.0 + 0j], self.var)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other):
        other = self._wrap(other)
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        self._check(other)
        rem = list(self.c)
        dq = len(self.c) - len(other.c)
        if dq < 0:
            return Poly([], self.var), self
        quo = [0] * (dq + 1)
        lead = other.c[-1]
        for k in range(dq, -1, -1):
            q = rem[k + len(other.c) - 1] / lead
            quo[k] = q
            if q != 0:
                for j, b in enumerate(other.c):
                    rem[k + j] -= q * b
        return Poly(quo, self.var), Poly(rem[:len(other.c) - 1], self.var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if r.c:
            raise ArithmeticError("inexact polynomial division")
        return q

    def __truediv__(self, a):
        if isinstance(a, Poly):
            return self.exact_div(a)
        a = _coerce(a)
        return Poly([x / a for x in self.c], self.var)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly([other], self.var)
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __call__(self, x):
        acc = 0
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def deriv(self):
        return Poly([k * a for k, a in enumerate(self.c)][1:], self.var)

    def monic(self):
        if not self.c:
            return self
        return self / self.c[-1]

    def shift(self, a):
        """Return p(x + a)."""
        out = Poly([], self.var)
        lin = Poly([a, 1], self.var)
        for coef in reversed(self.c):
            out = out * lin + coef
        return out

    def compose(self, q):
        out = Poly([], self.var)
        for coef in reversed(self.c):
            out = out * q + coef
        return out

    def to_numeric(self):
        return Poly([complex(a) for a in self.c], self.var)

    def to_json(self):
        if self.mode == EXACT:
            cs = [[str(a.numerator), str(a.denominator)] for a in self.c]
        else:
            cs = [[a.real, a.imag] for a in self.c]
        return {"var": self.var, "coeffs": cs}

    @classmethod
    def from_json(cls, obj):
        cs = obj["coeffs"]
        if cs and isinstance(cs[0][0], str):
            return cls([Fraction(int(n), int(d)) for n, d in cs], obj.get("var", "E"))
        return cls([complex(re, im) for re, im in cs], obj.get("var", "E"))

    def dumps(self):
        return json.dumps(self.to_json(), separators=(",", ":"))

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.c:
            return "0"
        terms = []
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if a == 0:
                continue
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            if self.mode == EXACT:
                neg = a < 0
                mag = -a if neg else a
                if mono and mag == 1:
                    body = mono
                else:
                    body = str(mag) + ("*" + mono if mono else "")
                terms.append(("-" if neg else "+", body))
            else:
                terms.append(("+", f"({a.real:.17g}{a.imag:+.17g}j)" + ("*" + mono if mono else "")))
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s


ONE = Poly([1])
ZERO = Poly([])
EVAR = Poly.gen("E")


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over the coefficient field."""
    while b.c:
        a, b = b, (a % b).monic()
    return a.monic()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if not a.c or not b.c:
        return Poly([], a.var)
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def gcd_many(polys) -> Poly:
    polys = [p for p in polys if p.c]
    if not polys:
        return ZERO
    return reduce(poly_gcd, polys[1:], polys[0].monic())


def squarefree_part(p: Poly) -> Poly:
    if p.deg <= 0:
        return p.monic()
    g = poly_gcd(p, p.deriv())
    return p.exact_div(g).monic()


def strip_factor(p: Poly, f: Poly) -> Poly:
    """Divide out every common factor of p and f, with multiplicity."""
    while True:
        g = poly_gcd(p, f)
        if g.deg <= 0:
            return p
        p = p.exact_div(g)


def resultant_univariate(a: Poly, b: Poly):
    """Resultant over a field by the Euclidean recursion."""
    if not a.c or not b.c:
        return a.c[0] * 0 if a.c else Fraction(0)
    res = Fraction(1) if a.mode == EXACT else 1.0 + 0j
    while True:
        m, n = a.deg, b.deg
        if n == 0:
            return res * b.c[0] ** m
        r = a % b
        if not r.c:
            return res * 0
        if (m * n) % 2:
            res = -res
        res *= b.lc ** (m - r.deg)
        a, b = b, r


def interpolate(xs, ys, var="E") -> Poly:
    """Newton divided differences; returns the polynomial through the nodes."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    p = Poly([coef[-1]], var)
    for i in range(n - 2, -1, -1):
        p = p * Poly([-xs[i], 1], var) + coef[i]
    return p


def _eval_nodes():
    k = 0
    while True:
        yield Fraction(k)
        if k:
            yield Fraction(-k)
        k += 1


class Bivar:
    """Polynomial in an auxiliary variable with ``Poly`` coefficients in E.

    ``coeffs[k]`` multiplies aux**k.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = list(coeffs)
        while cs and not cs[-1].c:
            cs.pop()
        self.coeffs = cs

    @property
    def deg(self):
        return len(self.coeffs) - 1

    def deg_e(self):
        return max((c.deg for c in self.coeffs), default=-1)

    def at_e(self, e):
        return Poly([c(e) for c in self.coeffs], "y")

    def at_aux(self, y):
        out = ZERO
        for c in reversed(self.coeffs):
            out = out * y + c
        return out

    def is_zero(self):
        return not self.coeffs


def resultant(P: Bivar, Q: Bivar) -> Poly:
    """Resultant with respect to the auxiliary variable, as a polynomial in E.

    Computed by evaluation at integer E and Newton interpolation.
    """
    if P.is_zero() or Q.is_zero():
        return ZERO
    dp, dq = P.deg, Q.deg
    if dp == 0:
        return P.coeffs[0] ** dq
    if dq == 0:
        return Q.coeffs[0] ** dp
    bound = dp * Q.deg_e() + dq * P.deg_e()
    lp, lq = P.coeffs[-1], Q.coeffs[-1]
    xs, ys = [], []
    for t in _eval_nodes():
        if lp(t) == 0 or lq(t) == 0:
            continue
        xs.append(t)
        ys.append(resultant_univariate(P.at_e(t), Q.at_e(t)))
        if len(xs) > bound:
            break
    return interpolate(xs, ys)


def det_poly(M):
    """Fraction-free (Bareiss) determinant of a square matrix of ``Poly``."""
    n = len(M)
    if n == 0:
        return ONE
    a = [[x if isinstance(x, Poly) else Poly([x]) for x in row] for row in M]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if a[i][k].c), None)
        if piv is None:
            return ZERO
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = (akk * a[i][j] - aik * a[k][j]).exact_div(prev)
            a[i][k] = ZERO
        prev = akk
    return a[n - 1][n - 1] * sign


def char_poly(A) -> Poly:
    """Monic characteristic polynomial det(E*I - A) of a rational matrix."""
    n = len(A)
    if n == 0:
        return ONE
    M = [[(EVAR if i == j else ZERO) - Poly([A[i][j]]) for j in range(n)]
         for i in range(n)]
    return det_poly(M).monic()


class RatE:
    """Rational function num/den in E over the rationals, den monic, reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, reduce_=True):
        num = num if isinstance(num, Poly) else Poly([num])
        den = ONE if den is None else (den if isinstance(den, Poly) else Poly([den]))
        if not den.c:
            raise ZeroDivisionError("zero denominator")
        if reduce_ and num.mode == EXACT:
            g = poly_gcd(num, den)
            if g.deg > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        lead = den.lc
        self.num = num / lead
        self.den = den / lead

    def __add__(self, o):
        o = o if isinstance(o, RatE) else RatE(o)
        return RatE(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatE(-self.num, self.den, reduce_=False)

    def __sub__(self, o):
        return self + (-(o if isinstance(o, RatE) else RatE(o)))

    def __rsub__(self, o):
        return RatE(o) - self

    def __mul__(self, o):
        o = o if isinstance(o, RatE) else RatE(o)
        return RatE(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = o if isinstance(o, RatE) else RatE(o)
        return RatE(self.num * o.den, self.den * o.num)

    def __pow__(self, n):
        return RatE(self.num ** n, self.den ** n)

    def __eq__(self, o):
        o = o if isinstance(o, RatE) else RatE(o)
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def deriv(self):
        return RatE(self.num.deriv() * self.den - self.num * self.den.deriv(),
                    self.den * self.den)

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    def __repr__(self):
        return f"RatE(({self.num}) / ({self.den}))"


def kernel_poly(M, monic_index=0):
    """Kernel vector of a polynomial matrix whose kernel over Q(E) is a line.

    Fraction-free Bareiss elimination, then back substitution; the result has
    polynomial entries with trivial common gcd and entry ``monic_index`` monic.
    """
    rows = [[x if isinstance(x, Poly) else Poly([x]) for x in r] for r in M]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    prev = ONE
    r = 0
    pivots = []
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c].c), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prc = rows[r][c]
        for i in range(r + 1, m):
            aic = rows[i][c]
            if aic.c:
                for j in range(c + 1, n):
                    rows[i][j] = (prc * rows[i][j] - aic * rows[r][j]).exact_div(prev)
            else:
                for j in range(c + 1, n):
                    rows[i][j] = (prc * rows[i][j]).exact_div(prev)
            rows[i][c] = ZERO
        prev = prc
        pivots.append(c)
        r += 1
        if r == m:
            break
    if len(pivots) != n - 1:
        raise KernelDimError(f"kernel dimension {n - len(pivots)} (expected 1)")
    free = next(c for c in range(n) if c not in pivots)
    sol = [None] * n
    sol[free] = RatE(ONE)
    for i in range(len(pivots) - 1, -1, -1):
        pc = pivots[i]
        acc = RatE(ZERO)
        for j in range(pc + 1, n):
            if rows[i][j].c and sol[j] is not None:
                acc = acc + RatE(rows[i][j]) * sol[j]
        sol[pc] = -acc / RatE(rows[i][pc])
    den = reduce(poly_lcm, [s.den for s in sol], ONE)
    vec = [s.num * den.exact_div(s.den) for s in sol]
    g = gcd_many(vec)
    vec = [v.exact_div(g) for v in vec]
    lead = vec[monic_index].lc
    if lead == 0:
        lead = next(v.lc for v in vec if v.c)
    return [v / lead for v in vec]


def roots_numeric(p: Poly, polish=1):
    """Roots via companion-matrix eigenvalues, then Newton polishing."""
    q = p.to_numeric() if p.mode == EXACT else p
    if q.deg <= 0:
        return []
    coeffs = np.array(q.c[::-1], dtype=complex)
    rts = np.roots(coeffs)
    dq = q.deriv()
    out = []
    for r in rts:
        r = complex(r)
        for _ in range(polish):
            d = dq(r)
            if d != 0:
                r = r - q(r) / d
        out.append(r)
    return out


class MPoly:
    """Sparse multivariate polynomial with rational coefficients.

    Terms map exponent tuples (length ``n``) to nonzero ``Fraction``.
    """

    __slots__ = ("t", "n")

    def __init__(self, terms=None, n=1):
        self.n = n
        self.t = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def const(cls, a, n):
        a = Fraction(a)
        return cls({(0,) * n: a} if a else {}, n)

    @classmethod
    def var(cls, i, n, power=1):
        e = [0] * n
        e[i] = power
        return cls({tuple(e): Fraction(1)}, n)

    def is_zero(self):
        return not self.t

    def __bool__(self):
        return bool(self.t)

    def _wrap(self, o):
        if isinstance(o, MPoly):
            return o
        return MPoly.const(o, self.n)

    def __add__(self, o):
        o = self._wrap(o)
        out = dict(self.t)
        for k, v in o.t.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        r = MPoly(n=self.n)
        r.t = out
        return r

    __radd__ = __add__

    def __neg__(self):
        r = MPoly(n=self.n)
        r.t = {k: -v for k, v in self.t.items()}
        return r

    def __sub__(self, o):
        return self + (-self._wrap(o))

    def __rsub__(self, o):
        return self._wrap(o) - self

    def __mul__(self, o):
        if not isinstance(o, MPoly):
            a = Fraction(o)
            if not a:
                return MPoly(n=self.n)
            r = MPoly(n=self.n)
            r.t = {k: v * a for k, v in self.t.items()}
            return r
        out = {}
        for k1, v1 in self.t.items():
            for k2, v2 in o.t.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return MPoly(out, self.n)

    __rmul__ = __mul__

    def __pow__(self, p):
        out = MPoly.const(1, self.n)
        for _ in range(p):
            out = out * self
        return out

    def __eq__(self, o):
        o = self._wrap(o)
        return self.t == o.t

    def __hash__(self):
        return hash(frozenset(self.t.items()))

    def constant_value(self):
        """The value if this is a constant polynomial, else None."""
        if not self.t:
            return Fraction(0)
        if len(self.t) == 1:
            (k, v), = self.t.items()
            if not any(k):
                return v
        return None

    def degree(self, i):
        return max((k[i] for k in self.t), default=-1)

    def coeffs_in(self, i):
        """List of MPoly coefficients of powers of variable i."""
        d = self.degree(i)
        out = [dict() for _ in range(d + 1)]
        for k, v in self.t.items():
            kk = list(k)
            kk[i] = 0
            out[k[i]][tuple(kk)] = v
        return [MPoly(o, self.n) for o in out]

    def subs(self, i, value):
        """Substitute variable i by a rational number or an MPoly."""
        out = MPoly(n=self.n)
        if not isinstance(value, MPoly):
            value = Fraction(value)
            acc = {}
            for k, v in self.t.items():
                kk = list(k)
                p = kk[i]
                kk[i] = 0
                kk = tuple(kk)
                acc[kk] = acc.get(kk, 0) + v * value ** p
            return MPoly(acc, self.n)
        powers = [MPoly.const(1, self.n)]
        for k, v in self.t.items():
            p = k[i]
            while len(powers) <= p:
                powers.append(powers[-1] * value)
            kk = list(k)
            kk[i] = 0
            out = out + MPoly({tuple(kk): v}, self.n) * powers[p]
        return out

    def divide_var(self, i):
        """Exact division by variable i; raises if some term lacks it."""
        out = {}
        for k, v in self.t.items():
            if k[i] == 0:
                raise ArithmeticError("not divisible")
            kk = list(k)
            kk[i] -= 1
            out[tuple(kk)] = v
        return MPoly(out, self.n)

    def used_vars(self):
        return {i for k in self.t for i, e in enumerate(k) if e}

    def to_poly(self, i, var="E"):
        """Univariate Poly in variable i (all other variables must be absent)."""
        if self.used_vars() - {i}:
            raise ValueError("polynomial involves other variables")
        d = self.degree(i)
        cs = [Fraction(0)] * (d + 1)
        for k, v in self.t.items():
            cs[k[i]] = v
        return Poly(cs, var)

    def to_bivar(self, aux, evar):
        """Bivar in variable ``aux`` with Poly-in-``evar`` coefficients."""
        return Bivar([c.to_poly(evar) for c in self.coeffs_in(aux)])

    def __repr__(self):
        if not self.t:
            return "0"
        return " + ".join(f"{v}*{k}" for k, v in sorted(self.t.items()))
