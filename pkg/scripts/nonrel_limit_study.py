#!/usr/bin/env python3
"""How the relativistic binding energy approaches the Bohr value.

Sweeps the speed of light over decades for a few low levels and fits the
exponent of the leading correction; the difference to -1/(2N^2) must
shrink as c^-2. Prints a table per level and a fitted exponent.

    python3 scripts/nonrel_limit_study.py --c-decades 2 3 4 5
"""

import argparse
import sys
from fractions import Fraction

import mpmath as mp

from dirac_su11.params import mp_str, nonrelativistic_limit_table

LEVELS = (
    (Fraction(1, 2), -1, 0),   # 1s
    (Fraction(1, 2), -1, 1),   # 2s
    (Fraction(1, 2), 1, 1),    # 2p, j=1/2
    (Fraction(3, 2), -1, 0),   # 2p, j=3/2
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--c-decades", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--Z", type=int, default=1)
    ap.add_argument("--precision", type=int, default=256)
    args = ap.parse_args()

    schedule = tuple(f"1e{d}" for d in args.c_decades)
    worst = 0.0
    for j, eps, n in LEVELS:
        table = nonrelativistic_limit_table(j, eps, n, c_schedule=schedule,
                                            Z=args.Z, precision=args.precision)
        print(f"level j={j} eps={eps:+d} n={n}")
        print(f"  {'c':>10}  {'binding':>24}  {'bohr':>24}  {'difference':>14}")
        for row in table.rows:
            print(f"  {str(row.c):>10}  {mp_str(row.binding, 64):>24.24}"
                  f"  {mp_str(row.bohr, 64):>24.24}"
                  f"  {mp.nstr(row.difference, 6):>14}")
        exponent = float(table.fitted_exponent)
        worst = max(worst, abs(exponent + 2))
        print(f"  fitted correction exponent: {exponent:.6f}\n")
    print(f"largest deviation from -2: {worst:.2e}")
    return 0 if worst <= 0.1 else 1


if __name__ == "__main__":
    sys.exit(main())
