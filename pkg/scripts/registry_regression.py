"""Compare every reference entry with the computed tables on one or more lattices.

    python3 scripts/registry_regression.py 5,-2,-3 7,-1,-6
"""
import argparse
import sys
import time
from fractions import Fraction

from heunfg import registry as R


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("lattices", nargs="*", default=["5,-2,-3"], help="branch points e1,e2,e3")
    args = ap.parse_args()
    failed = 0
    for text in args.lattices:
        e = tuple(Fraction(x) for x in text.split(","))
        for ls in R.keys():
            t0 = time.perf_counter()
            bad = R.compare(ls, e)
            failed += bool(bad)
            status = "ok" if not bad else "MISMATCH " + ",".join(bad)
            print(f"{text:>10}  {','.join(map(str, ls))}  g={R.reference(ls, e).genus}  "
                  f"{status}  {time.perf_counter() - t0:.2f}s", flush=True)
    print(f"{failed} mismatching case(s)")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
