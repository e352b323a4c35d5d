"""Command-line entry point: ``tables``, ``verify`` and ``sweep``.

Exit status: 0 when every gate passes, 1 on a failed gate, 2 on bad input.
Settings resolve as flags, then HEUN_TOL / HEUN_LATTICE, then defaults.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import elliptic as ell
from .case import get_case
from .errors import AtBranchPoint, CollidingRoots, DegenerateLattice, HeunError
from .finitegap import structural_report
from .hka import cover_point, validate_covering
from .polyalg import Poly
from .registry import keys as registry_keys
from .registry import xi_terms_of
from .verify import (check_first_kind, check_second_kind, exact_identities,
                     hermite_substitution, monodromy_check)
from .xi import Couplings

DEFAULT_LATTICE = "5,-2,-3"
DEFAULT_TOL = 1e-8
MONODROMY_GATE = 1e-6
DET_GATE = 1e-9
MONODROMY_BOX = 5.0          # det error grows like |M|^2 eps; keep |E| moderate


class UsageError(Exception):
    pass


# --- formatting ----------------------------------------------------------------------

def fmt_float(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, ".17g")


def fmt_rational(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _plain(obj):
    """Normalise to str/int/bool/None/float/list/dict with exact values as strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return fmt_rational(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Poly):
        return [_plain(c) for c in obj.c]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj):
    """Compact JSON with 17-significant-digit floats and keys in insertion order."""
    return _emit(_plain(obj))


def _emit(v):
    if v is None:
        return "null"
    if v is True:
        return "true"
    if v is False:
        return "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, str):
        return _quote(v)
    if isinstance(v, list):
        return "[" + ",".join(_emit(x) for x in v) + "]"
    return "{" + ",".join(_quote(k) + ":" + _emit(x) for k, x in v.items()) + "}"


def _quote(s):
    return json.dumps(s)


# --- configuration -------------------------------------------------------------------

@dataclass(frozen=True)
class CaseSpec:
    couplings: Couplings
    e: tuple                         # exact branch points
    fmt: str = "json"
    tol: float = DEFAULT_TOL
    lattice_source: str = "default"
    notes: list = field(default_factory=list, compare=False)


def _parse_couplings(text):
    try:
        ls = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--l expects four integers, got {text!r}")
    if len(ls) != 4:
        raise UsageError("--l expects four integers a,b,c,d")
    try:
        return Couplings.of(ls)
    except ValueError as exc:
        raise UsageError(str(exc))


def _parse_branch_points(text):
    try:
        es = tuple(Fraction(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"branch points must be rationals, got {text!r}")
    if len(es) != 3:
        raise UsageError("branch points need three values e1,e2,e3")
    if sum(es) != 0 or len(set(es)) != 3:
        raise DegenerateLattice("branch points must be distinct and sum to zero")
    return es


def _parse_half_periods(text):
    try:
        re1, im1, re3, im3 = (float(x) for x in text.split(","))
    except ValueError:
        raise UsageError("--half-periods expects re1,im1,re3,im3")
    L = ell.lattice_from_half_periods(complex(re1, im1), complex(re3, im3))
    es = []
    for v in L.e:
        q = Fraction(v.real).limit_denominator(10 ** 4)
        if abs(v.imag) > 1e-9 * max(1.0, abs(v)) or abs(v - float(q)) > 1e-9 * max(1.0, abs(v)):
            raise UsageError("the exact pipeline needs rational branch points; "
                             f"e = {v} from these half-periods is not recognisably rational")
        es.append(q)
    if sum(es) != 0:
        raise UsageError("the exact pipeline needs rational branch points; "
                         "the values from these half-periods do not round consistently")
    return _parse_branch_points(",".join(str(x) for x in es))


def _lattice_text(text):
    parts = text.split(",")
    if len(parts) == 3:
        return _parse_branch_points(text)
    if len(parts) == 4:
        return _parse_half_periods(text)
    raise UsageError(f"cannot read a lattice from {text!r}")


def resolve(args, env=None) -> CaseSpec:
    env = os.environ if env is None else env
    if args.l is None:
        raise UsageError("--l is required")
    C = _parse_couplings(args.l)
    if args.branch_points is not None:
        e, src = _parse_branch_points(args.branch_points), "flag"
    elif args.half_periods is not None:
        e, src = _parse_half_periods(args.half_periods), "flag"
    elif env.get("HEUN_LATTICE"):
        e, src = _lattice_text(env["HEUN_LATTICE"]), "env"
    else:
        e, src = _parse_branch_points(DEFAULT_LATTICE), "default"
    tol = args.tol
    if tol is None and env.get("HEUN_TOL"):
        try:
            tol = float(env["HEUN_TOL"])
        except ValueError:
            raise UsageError(f"HEUN_TOL is not a number: {env['HEUN_TOL']!r}")
    tol = DEFAULT_TOL if tol is None else tol
    if not tol > 0:
        raise UsageError("tolerance must be positive")
    return CaseSpec(C, e, args.format, tol, src)


# --- tables --------------------------------------------------------------------------

def tables_record(spec: CaseSpec):
    case = get_case(spec.couplings, spec.e)
    X, HS = case.xi, case.heun
    xi_terms = [{"shift": i, "power": n, "coeff": p}
                for (i, n), p in sorted(xi_terms_of(X).items())]
    return {
        "couplings": list(spec.couplings.as_tuple()),
        "branch_points": list(case.e),
        "in_registry": spec.couplings.as_tuple() in registry_keys(),
        "genus": case.genus,
        "Xi": xi_terms,
        "Q": case.Q,
        "a": X.a,
        "c": X.c,
        "H": list(HS.H),
        "Ht": list(HS.Ht),
        "Htheta": HS.Htheta,
    }


def _poly_rows(name, p, index=""):
    return [[name, index, str(k), fmt_rational(c)] for k, c in enumerate(p.c)]


def _tables_csv(rec):
    rows = [["field", "index", "power_of_E", "coefficient"]]
    rows.append(["genus", "", "", str(rec["genus"])])
    for t in rec["Xi"]:
        rows += _poly_rows("Xi", t["coeff"], f"{t['shift']}:{t['power']}")
    for name in ("Q", "a", "c"):
        rows += _poly_rows(name, rec[name])
    for name in ("H", "Ht"):
        for i, p in enumerate(rec[name]):
            rows += _poly_rows(name, p, str(i))
    rows += _poly_rows("Htheta", rec["Htheta"])
    return _csv(rows)


def _tables_text(rec):
    lines = [f"couplings {','.join(map(str, rec['couplings']))}  "
             f"branch points {', '.join(fmt_rational(x) for x in rec['branch_points'])}",
             f"genus {rec['genus']}"]
    for t in rec["Xi"]:
        label = "1" if t["power"] == 0 else f"P{t['shift']}^{t['power']}"
        lines.append(f"Xi[{label}] = {t['coeff']}")
    for name in ("Q", "a", "c"):
        lines.append(f"{name} = {rec[name]}")
    for name in ("H", "Ht"):
        for i, p in enumerate(rec[name]):
            lines.append(f"{name}{i} = {p}")
    lines.append(f"Htheta = {rec['Htheta']}")
    return "\n".join(lines) + "\n"


def _csv(rows):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_tables(spec: CaseSpec):
    rec = tables_record(spec)
    if spec.fmt == "csv":
        return _tables_csv(rec), 0
    if spec.fmt == "text":
        return _tables_text(rec), 0
    return dumps(rec) + "\n", 0


# --- verify --------------------------------------------------------------------------

@dataclass
class Gate:
    suite: str
    name: str
    value: object            # float residual or bool
    threshold: float | None = None

    @property
    def ok(self):
        if isinstance(self.value, bool):
            return self.value
        return self.value is not None and self.value < self.threshold

    def as_dict(self):
        return {"suite": self.suite, "gate": self.name, "value": self.value,
                "threshold": self.threshold, "pass": self.ok}


def random_energies(n, seed, box):
    rng = np.random.default_rng(seed)
    return [complex(x, y) for x, y in rng.uniform(-box, box, size=(n, 2))]


def suite_covering(spec, seed=0, n=20):
    case = get_case(spec.couplings, spec.e)
    gates = []
    rep = structural_report(case.heun, case.Q, case.genus)
    for k, v in rep.items():
        gates.append(Gate("covering", k, bool(v)))
    wp_res, ksq_res = [], []
    for E in random_energies(n, seed, 40.0):
        r = validate_covering(cover_point(case.xi, case.lattice, E), case.heun, case.couplings)
        wp_res.append(r.wp_residual)
        ksq_res.append(r.kappa_sq_residual)
    gates.append(Gate("covering", "wp_alpha_vs_xi", max(wp_res), spec.tol))
    gates.append(Gate("covering", "kappa_squared", max(ksq_res), spec.tol))
    return gates


def suite_reduction(spec):
    C, e = spec.couplings, spec.e
    gates = [Gate("reduction", f"exact_{k}", bool(v)) for k, v in exact_identities(C, e).items()]
    gates.append(Gate("reduction", "first_kind_grid", check_first_kind(C, e).max_first, spec.tol))
    gates.append(Gate("reduction", "second_kind_grid", check_second_kind(C, e).max_second, spec.tol))
    if C.as_tuple() == (2, 0, 0, 0):
        sub = hermite_substitution(e)
        for k in ("xi", "Q", "a", "kappa_sq"):
            gates.append(Gate("reduction", f"hermite_{k}", bool(sub[k])))
    return gates


def suite_monodromy(spec, seed=0, n=5):
    gates = []
    worst, worst_det = 0.0, 0.0
    for E in random_energies(n, seed + 1, MONODROMY_BOX):
        for k in (1, 2, 3):
            r = monodromy_check(spec.couplings, spec.e, E, k)
            worst = max(worst, r.residual)
            worst_det = max(worst_det, r.det_residual)
    gates.append(Gate("monodromy", "multiplier", worst, max(spec.tol, MONODROMY_GATE)))
    gates.append(Gate("monodromy", "determinant", worst_det, DET_GATE))
    return gates


SUITES = {"covering": suite_covering, "reduction": suite_reduction, "monodromy": suite_monodromy}


def _run_suite(name, spec, seed):
    fn = SUITES[name]
    try:
        return fn(spec, seed) if name != "reduction" else fn(spec)
    except HeunError as exc:
        return [Gate(name, f"error:{type(exc).__name__}", False)]


def cmd_verify(spec: CaseSpec, suite="all", seed=0):
    names = list(SUITES) if suite == "all" else [suite]
    gates = [g for name in names for g in _run_suite(name, spec, seed)]
    ok = all(g.ok for g in gates)
    if spec.fmt == "csv":
        rows = [["suite", "gate", "value", "threshold", "pass"]]
        for g in gates:
            v = g.value if isinstance(g.value, bool) else fmt_float(g.value)
            t = "" if g.threshold is None else fmt_float(g.threshold)
            rows.append([g.suite, g.name, str(v).lower(), t, str(g.ok).lower()])
        text = _csv(rows)
    elif spec.fmt == "text":
        lines = []
        for g in gates:
            v = g.value if isinstance(g.value, bool) else f"{fmt_float(g.value)} < {fmt_float(g.threshold)}"
            lines.append(f"{'PASS' if g.ok else 'FAIL'}  {g.suite}/{g.name}: {v}")
        lines.append("all gates passed" if ok else "verification FAILED")
        text = "\n".join(lines) + "\n"
    else:
        text = dumps({"couplings": list(spec.couplings.as_tuple()),
                      "branch_points": list(spec.e), "suite": suite,
                      "gates": [g.as_dict() for g in gates], "pass": ok}) + "\n"
    return text, 0 if ok else 1


# --- sweep ---------------------------------------------------------------------------

def _parse_complex(text):
    try:
        return complex(text.strip().replace("i", "j").replace(" ", ""))
    except ValueError:
        raise UsageError(f"not a complex number: {text!r}")


def parse_path(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError("--path expects start,end,n")
    try:
        n = int(parts[2])
    except ValueError:
        raise UsageError("--path: n must be an integer")
    if n < 0:
        raise UsageError("--path: n must be nonnegative")
    return _parse_complex(parts[0]), _parse_complex(parts[1]), n


def sweep_records(spec, start, end, n, warn=None):
    case = get_case(spec.couplings, spec.e)
    pts = [] if n == 0 else ([start] if n == 1 else list(np.linspace(start, end, n)))
    out = []
    for E in pts:
        E = complex(E)
        rec = {"E": E, "nudged": False, "skipped": False}
        cp = None
        for attempt in range(2):
            try:
                cp = cover_point(case.xi, case.lattice, E)
                break
            except (AtBranchPoint, CollidingRoots) as exc:
                if attempt == 0:
                    E = E + 1e-6j * max(1.0, abs(E))
                    rec["nudged"] = True
                    if warn:
                        warn(f"warning: {exc}; nudged to {E}")
                else:
                    rec["skipped"] = True
                    rec["reason"] = type(exc).__name__
        if cp is not None:
            r = validate_covering(cp, case.heun, case.couplings)
            rec.update({"E": E, "alpha": cp.alpha, "kappa": cp.kappa, "wp_alpha": cp.wp_alpha,
                        "residuals": {"wp_alpha": r.wp_residual, "kappa_squared": r.kappa_sq_residual,
                                      "kappa": r.kappa_residual}})
        out.append(rec)
    return out


def cmd_sweep(spec: CaseSpec, path):
    start, end, n = path
    recs = sweep_records(spec, start, end, n, warn=lambda m: print(m, file=sys.stderr))
    if spec.fmt == "csv":
        head = ["E_re", "E_im", "alpha_re", "alpha_im", "kappa_re", "kappa_im",
                "wp_alpha_re", "wp_alpha_im", "res_wp_alpha", "res_kappa_squared", "nudged", "skipped"]
        rows = [head]
        for r in recs:
            row = [fmt_float(r["E"].real), fmt_float(r["E"].imag)]
            for key in ("alpha", "kappa", "wp_alpha"):
                v = r.get(key)
                row += ["", ""] if v is None else [fmt_float(v.real), fmt_float(v.imag)]
            res = r.get("residuals", {})
            row += [fmt_float(res[k]) if k in res else "" for k in ("wp_alpha", "kappa_squared")]
            row += [str(r["nudged"]).lower(), str(r["skipped"]).lower()]
            rows.append(row)
        text = _csv(rows) if recs else ""
    elif spec.fmt == "text":
        text = "".join(
            f"E={r['E']:.6g} skipped\n" if r["skipped"] else
            f"E={r['E']:.6g} alpha={r['alpha']:.6g} kappa={r['kappa']:.6g} "
            f"wp(alpha)={r['wp_alpha']:.6g} res={r['residuals']['wp_alpha']:.2e}\n"
            for r in recs)
    else:
        text = "".join(dumps(r) + "\n" for r in recs)
    bad = any(not r["skipped"] and r["residuals"]["wp_alpha"] >= spec.tol for r in recs)
    return text, 1 if bad else 0


# --- entry point ---------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--l", metavar="a,b,c,d", help="couplings l0,l1,l2,l3")
    lat = common.add_mutually_exclusive_group()
    lat.add_argument("--branch-points", metavar="e1,e2,e3",
                     help="rational branch points summing to zero")
    lat.add_argument("--half-periods", metavar="re1,im1,re3,im3",
                     help="half periods omega1, omega3 (branch points must come out rational)")
    common.add_argument("--tol", type=float, default=None, help="residual gate (default 1e-8)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")

    p = argparse.ArgumentParser(prog="heunfg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("tables", parents=[common], help="emit Xi, Q, a, c and the polynomial families")
    v = sub.add_parser("verify", parents=[common], help="run verification gates")
    v.add_argument("--suite", choices=("covering", "reduction", "monodromy", "all"), default="all")
    v.add_argument("--seed", type=int, default=0)
    s = sub.add_parser("sweep", parents=[common], help="cover points along a segment in E")
    s.add_argument("--path", required=True, metavar="start,end,n")
    return p


def main(argv=None, env=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = resolve(args, env)
        if args.command == "tables":
            text, code = cmd_tables(spec)
        elif args.command == "verify":
            text, code = cmd_verify(spec, args.suite, args.seed)
        else:
            text, code = cmd_sweep(spec, parse_path(args.path))
    except (UsageError, DegenerateLattice, NotImplementedError) as exc:
        print(f"heunfg: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
