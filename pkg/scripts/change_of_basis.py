"""Express theta_s (the family starting at w) in the Theta basis at p = 2 and back.

Both families give bases of the numerical functions mod 2^N once the level
is large enough; this prints the transition coefficients mod 2^N.
"""

import argparse

from thetak.basis import theta_basis_expand
from thetak.kk import BIG_THETA, THETA, theta


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--smax", type=int, default=3)
    ap.add_argument("--level", type=int, default=6)
    ap.add_argument("--precision", type=int, default=12)
    args = ap.parse_args()
    for src, dst in ((THETA, BIG_THETA), (BIG_THETA, THETA)):
        print(f"{src}_s in the {dst} basis, mod 2^{args.precision}:")
        for s in range(args.smax + 1):
            try:
                e = theta_basis_expand(theta(s, 2, src), args.level, args.precision, family=dst)
                print(f"  {src}[{s}] = {e}")
            except ArithmeticError as exc:
                print(f"  {src}[{s}]: {exc}")


if __name__ == "__main__":
    main()
