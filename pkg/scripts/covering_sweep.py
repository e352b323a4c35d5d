"""Track alpha and kappa along a ray in E and compare with the rational covering map.

Prints |E|, the residuals of wp(alpha) and kappa^2, and the ratios that tend to
one at large |E| (wp(alpha) s^2 / (-4E) and kappa / ((1 - 2/s) sqrt(-E))).
"""
import argparse

import numpy as np

from heunfg.case import get_case
from heunfg.hka import cover_point, validate_covering


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--l", default="2,1,0,0")
    ap.add_argument("--branch-points", default="5,-2,-3")
    ap.add_argument("--angle", type=float, default=0.3, help="direction of the ray (radians)")
    ap.add_argument("--decades", type=int, default=7)
    args = ap.parse_args()
    ls = tuple(int(x) for x in args.l.split(","))
    case = get_case(ls, tuple(int(x) for x in args.branch_points.split(",")))
    s = case.couplings.s
    print(f"couplings {ls}, genus {case.genus}, s = {s}")
    print(f"{'|E|':>8} {'wp res':>9} {'k^2 res':>9} {'wp ratio':>22} {'kappa ratio':>22}")
    for r in np.logspace(0, args.decades, 3 * args.decades + 1):
        E = r * np.exp(1j * args.angle)
        cp = cover_point(case.xi, case.lattice, E)
        rep = validate_covering(cp, case.heun, case.couplings)
        root = cp.sqrtQ / E ** case.genus
        wr = cp.wp_alpha * s * s / (-4 * E)
        kr = cp.kappa / ((1 - 2 / s) * root) if s != 2 else float("nan")
        print(f"{r:8.1e} {rep.wp_residual:9.1e} {rep.kappa_sq_residual:9.1e} "
              f"{complex(wr):22.6f} {complex(kr):22.6f}")


if __name__ == "__main__":
    main()
