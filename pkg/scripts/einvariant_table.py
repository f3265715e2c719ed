"""Print orders and generators of the e-invariant groups for a range of degrees."""

import argparse

from thetak.basis import display
from thetak.kk import einvariant


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5])
    ap.add_argument("--nmax", type=int, default=12)
    ap.add_argument("--precision", type=int, default=24)
    args = ap.parse_args()
    for p in args.primes:
        print(f"p = {p}")
        for n in range(1, args.nmax + 1):
            e = einvariant(n, p, args.precision)
            print(f"  n={n:3d}  order {e.order:6d}  generator {display(e.generator)}")


if __name__ == "__main__":
    main()
