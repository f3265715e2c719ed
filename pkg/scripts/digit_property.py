"""Compare Theta_r(a) mod 2 with the binary digit a_r of 1 - a = sum 2^(j+1) a_j.

Counts mismatches over all units mod 2^(r+3), and checks the weaker
statement that Theta_r(a) - a_r mod 2 only depends on a_0, ..., a_(r-1).
"""

import argparse

from thetak.arith import mod_pn
from thetak.kk import BIG_THETA, theta
from thetak.suites import binary_digit


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rmax", type=int, default=8)
    args = ap.parse_args()
    for r in range(args.rmax + 1):
        f = theta(r, 2, BIG_THETA).body
        units = range(1, 2 ** (r + 3), 2)
        diffs = {}
        bad, first, triangular = 0, None, True
        for a in units:
            d = (mod_pn(f(a), 2, 1) - binary_digit(a, r)) % 2
            if d:
                bad += 1
                first = first or a
            low = tuple(binary_digit(a, j) for j in range(r))
            triangular &= diffs.setdefault(low, d) == d
        print(f"r={r}: {bad}/{len(units)} mismatches" + (f" (first a={first}, Theta_r(a)={f(first)})" if bad else "")
              + f", difference depends on lower digits only: {triangular}")


if __name__ == "__main__":
    main()
