"""Transfer-matrix eigenvalues of the ODE next to the Bloch multipliers from (alpha, kappa)."""
import argparse

import numpy as np

from heunfg.verify import monodromy_check


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--l", default="1,1,1,1")
    ap.add_argument("--branch-points", default="5,-2,-3")
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--mode", choices=("midpoint", "offset"), default="midpoint")
    args = ap.parse_args()
    ls = tuple(int(x) for x in args.l.split(","))
    e = tuple(int(x) for x in args.branch_points.split(","))
    rng = np.random.default_rng(args.seed)
    for x, y in rng.uniform(-5, 5, (args.n, 2)):
        E = complex(x, y)
        for k in (1, 2, 3):
            r = monodromy_check(ls, e, E, k, mode=args.mode)
            print(f"E={E:.4f} k={k}  ode={r.multiplier_ode:.10f}  formula={r.multiplier_formula:.10f}"
                  f"  rel={r.residual:.1e}  |det-1|={r.det_residual:.1e}")


if __name__ == "__main__":
    main()
