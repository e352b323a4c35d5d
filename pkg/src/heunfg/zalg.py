"""Rational functions of z = wp(x) with poles only at the branch points.

A ``ZRat`` is N(z) / prod_k (z - e_k)^n_k with N a dense list of ``MPoly``
coefficients (ascending in z).  Branch points e_k are exact rationals.
"""
from __future__ import annotations

from fractions import Fraction

from .polyalg import MPoly


def zp_trim(a):
    while a and a[-1].is_zero():
        a.pop()
    return a


def zp_add(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        if i < len(a) and i < len(b):
            out.append(a[i] + b[i])
        else:
            out.append(a[i] if i < len(a) else b[i])
    return zp_trim(out)


def zp_scale(a, s):
    return zp_trim([x * s for x in a])


def zp_mul(a, b):
    if not a or not b:
        return []
    out = [None] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            t = x * y
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    nvars = a[0].n
    return zp_trim([o if o is not None else MPoly(n=nvars) for o in out])


def zp_deriv(a):
    return zp_trim([a[k] * k for k in range(1, len(a))])


def zp_const(c, nvars):
    c = c if isinstance(c, MPoly) else MPoly.const(c, nvars)
    return zp_trim([c])


def zp_linear(e, nvars):
    """The polynomial z - e."""
    return [MPoly.const(-Fraction(e), nvars), MPoly.const(1, nvars)]


def zp_from_rationals(cs, nvars):
    return zp_trim([MPoly.const(c, nvars) for c in cs])


def zp_eval(a, z):
    acc = None
    for c in reversed(a):
        acc = c if acc is None else acc * z + c
    return acc


def zp_shift(a, e):
    """Coefficients of a(z) in powers of u = z - e."""
    out = []
    for c in reversed(a):
        out = zp_add(zp_mul(out, [MPoly.const(e, c.n), MPoly.const(1, c.n)]) if out else [], [c])
    return out


def zp_divide_linear(a, e):
    """Exact division by (z - e); raises if the remainder is nonzero."""
    if not a:
        return []
    n = len(a) - 1
    q = [None] * n
    carry = a[n]
    for k in range(n - 1, -1, -1):
        q[k] = carry
        carry = a[k] + carry * e
    if not carry.is_zero():
        raise ArithmeticError("not divisible by (z - e)")
    return zp_trim(q)


class ZRat:
    __slots__ = ("num", "ex", "es", "nv")

    def __init__(self, num, ex, es, nv):
        self.num = zp_trim(list(num))
        self.ex = tuple(ex)
        self.es = es
        self.nv = nv

    @classmethod
    def poly(cls, num, es, nv):
        return cls(num, (0, 0, 0), es, nv)

    def _lift(self, target):
        num = self.num
        for k in range(3):
            for _ in range(target[k] - self.ex[k]):
                num = zp_mul(num, zp_linear(self.es[k], self.nv))
        return num

    def _as_zrat(self, o):
        if isinstance(o, ZRat):
            return o
        return ZRat(zp_const(o, self.nv), (0, 0, 0), self.es, self.nv)

    def __add__(self, o):
        o = self._as_zrat(o)
        t = tuple(max(a, b) for a, b in zip(self.ex, o.ex))
        return ZRat(zp_add(self._lift(t), o._lift(t)), t, self.es, self.nv)

    __radd__ = __add__

    def __neg__(self):
        return ZRat([-c for c in self.num], self.ex, self.es, self.nv)

    def __sub__(self, o):
        return self + (-self._as_zrat(o))

    def __mul__(self, o):
        if isinstance(o, ZRat):
            return ZRat(zp_mul(self.num, o.num), tuple(a + b for a, b in zip(self.ex, o.ex)),
                        self.es, self.nv)
        if isinstance(o, list):
            return ZRat(zp_mul(self.num, o), self.ex, self.es, self.nv)
        s = o if isinstance(o, MPoly) else MPoly.const(o, self.nv)
        return ZRat(zp_scale(self.num, s), self.ex, self.es, self.nv)

    __rmul__ = __mul__

    def deriv(self):
        active = [k for k in range(3) if self.ex[k] != 0]
        base = [MPoly.const(1, self.nv)]
        for k in active:
            base = zp_mul(base, zp_linear(self.es[k], self.nv))
        num = zp_mul(zp_deriv(self.num), base)
        for k in active:
            rest = [MPoly.const(1, self.nv)]
            for j in active:
                if j != k:
                    rest = zp_mul(rest, zp_linear(self.es[j], self.nv))
            num = zp_add(num, zp_scale(zp_mul(self.num, rest), MPoly.const(-self.ex[k], self.nv)))
        ex = tuple(self.ex[k] + (1 if k in active else 0) for k in range(3))
        return ZRat(num, ex, self.es, self.nv)

    def cleared(self, target):
        """Numerator after multiplying by prod (z - e_k)^target_k."""
        num = list(self.num)
        for k in range(3):
            d = target[k] - self.ex[k]
            for _ in range(d):
                num = zp_mul(num, zp_linear(self.es[k], self.nv))
            for _ in range(-d):
                num = zp_divide_linear(num, self.es[k])
        return num

    def as_poly(self):
        return self.cleared((0, 0, 0))

    def at(self, z):
        """Value at a rational z (an MPoly in the remaining variables)."""
        z = Fraction(z)
        den = Fraction(1)
        for k in range(3):
            den *= (z - self.es[k]) ** self.ex[k]
        val = zp_eval(self.num, z)
        if val is None:
            return MPoly(n=self.nv)
        return val * (1 / den)


def inv_linear(e, k, es, nv):
    """1/(z - e_k) as a ZRat."""
    ex = [0, 0, 0]
    ex[k] = 1
    return ZRat([MPoly.const(1, nv)], ex, es, nv)
