"""Reference polynomials for low-genus couplings, stored symbolically.

Entries live in ``data/tables.json`` as arithmetic expressions in
E, e1, e2, e3, g2, g3 and P0..P3 (P_i = wp(x + omega_i)).  They are parsed
with ``ast`` (no ``eval``) and evaluated exactly once branch points are fixed.
"""
from __future__ import annotations

import ast
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .polyalg import MPoly, Poly
from .xi import Couplings, exact_branch_points, invariants

# ring variables: E, P0, P1, P2, P3
_NV = 5
_SYMBOLS = ("E", "P0", "P1", "P2", "P3")


@lru_cache(maxsize=1)
def _raw():
    text = resources.files("heunfg").joinpath("data/tables.json").read_text()
    return json.loads(text)["cases"]


def keys():
    return [tuple(int(x) for x in k.split(",")) for k in _raw()]


def _key(C):
    return str(Couplings.of(C))


class _Eval:
    def __init__(self, env):
        self.env = env

    def __call__(self, text):
        return self.visit(ast.parse(text, mode="eval").body)

    def visit(self, node):
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return MPoly.const(node.value, _NV)
        if isinstance(node, ast.Name):
            if node.id not in self.env:
                raise ValueError(f"unknown symbol {node.id!r}")
            return self.env[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self.visit(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a, b = self.visit(node.left), self.visit(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                d = b.constant_value()
                if d is None or d == 0:
                    raise ValueError("division only by nonzero constants")
                return a * (1 / d)
            if isinstance(node.op, ast.Pow):
                n = b.constant_value()
                if n is None or n.denominator != 1 or n < 0:
                    raise ValueError("exponent must be a nonnegative integer")
                return a ** int(n)
        raise ValueError(f"unsupported expression node {type(node).__name__}")


def _env(es):
    g2, g3 = invariants(es)
    env = {s: MPoly.var(i, _NV) for i, s in enumerate(_SYMBOLS)}
    for name, val in zip(("e1", "e2", "e3", "g2", "g3"), (*es, g2, g3)):
        env[name] = MPoly.const(val, _NV)
    return env


def _expand(entry):
    """[H0, Hk-template] -> four expressions; four-element lists pass through."""
    if len(entry) == 4:
        return list(entry)
    base, tmpl = entry
    return [base] + [None if tmpl is None else tmpl.replace("ek", f"e{k}") for k in (1, 2, 3)]


@dataclass(frozen=True)
class Reference:
    couplings: Couplings
    genus: int
    xi: dict            # (i, n) -> Poly, coefficient of P_i^n; (0, 0) is the constant term
    a: Poly
    c: Poly
    Q: Poly
    H: tuple
    Ht: tuple           # None where no reference value is stored
    Htheta: Poly
    alias_of: tuple | None


def _merged(key):
    raw = _raw()
    entry = dict(raw[key])
    if "same_as" in entry:
        base = _merged(entry["same_as"])
        for k, v in base.items():
            entry.setdefault(k, v)
    return entry


def _xi_terms(poly: MPoly):
    out = {}
    for k, v in poly.t.items():
        used = [i for i in range(4) if k[i + 1]]
        if len(used) > 1:
            raise ValueError("mixed products of shifted wp in a table entry")
        idx = (used[0], k[used[0] + 1]) if used else (0, 0)
        coef = out.get(idx, Poly([]))
        out[idx] = coef + Poly([0] * k[0] + [v])
    return {k: v for k, v in out.items() if not v.is_zero()}


def _shift_terms(terms, j):
    """Translate x -> x + omega_j: P_i -> P_{i xor j} in the Klein-group labelling."""
    klein = {0: 0, 1: 1, 2: 3, 3: 2}     # omega index -> bit pattern (w1 = 01, w3 = 10)
    back = {v: k for k, v in klein.items()}
    out = {}
    for (i, n), v in terms.items():
        target = (back[klein[i] ^ klein[j]], n) if n else (0, 0)
        out[target] = out.get(target, Poly([])) + v
    return out


def reference(C, e) -> Reference:
    key = _key(C)
    if key not in _raw():
        raise KeyError(f"no reference entry for couplings {key}")
    es = exact_branch_points(e)
    ev = _Eval(_env(es))
    entry = _merged(key)

    def poly(text):
        return ev(text).to_poly(0)

    H = tuple(poly(t) for t in _expand(entry["H"]))
    Ht = tuple(None if t is None else poly(t) for t in _expand(entry["Ht"]))
    Qtext = entry["Q"]
    for k in range(4):
        Qtext = Qtext.replace(f"H{k}", f"({_expand(entry['H'])[k]})")
    if "xi_shift" in entry:
        src, j = entry["xi_shift"]
        xi = _shift_terms(_xi_terms(_Eval(_env(es))(_merged(src)["Xi"])), j)
    else:
        xi = _xi_terms(ev(entry["Xi"]))
    alias = entry.get("same_as")
    return Reference(
        couplings=Couplings.of(C), genus=entry["genus"], xi=xi,
        a=poly(entry["a"]), c=poly(entry["c"]), Q=poly(Qtext),
        H=H, Ht=Ht, Htheta=poly(entry["Htheta"]),
        alias_of=tuple(int(x) for x in alias.split(",")) if alias else None,
    )


def xi_terms_of(X):
    """The same (i, n) -> Poly map for a computed XiData."""
    out = {(0, 0): X.c0} if not X.c0.is_zero() else {}
    for i, bi in enumerate(X.b):
        n_top = len(bi)
        for j, coef in enumerate(bi):
            if not coef.is_zero():
                out[(i, n_top - j)] = coef
    return out


def compare(C, e):
    """Names of the fields where computed data differ from the reference entry."""
    from .case import get_case
    ref = reference(C, e)
    case = get_case(C, e)
    bad = []
    if xi_terms_of(case.xi) != ref.xi:
        bad.append("Xi")
    for name, got, want in (("a", case.xi.a, ref.a), ("c", case.xi.c, ref.c), ("Q", case.Q, ref.Q)):
        if got != want:
            bad.append(name)
    if case.genus != ref.genus:
        bad.append("genus")
    HS = case.heun
    for k in range(4):
        if HS.H[k] != ref.H[k]:
            bad.append(f"H{k}")
        if ref.Ht[k] is not None and HS.Ht[k] != ref.Ht[k]:
            bad.append(f"Ht{k}")
    if HS.Htheta != ref.Htheta:
        bad.append("Htheta")
    return bad
