"""Coactions of Q^s applied to the generators of S//eta, S//nu and S//sigma."""

import argparse

from thetak.free import coaction, free_Q, preset_generators, theta_var


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--smax", type=int, default=2, help="highest Q-iterate to print")
    ap.add_argument("--terms", type=int, default=12, help="truncate long outputs to this many terms")
    args = ap.parse_args()
    for name, g in preset_generators().items():
        print(f"S//{name}: Psi({g.name}) = w^{g.twist} (x) {g.name} + c")
        e = theta_var(2, g.name)
        for s in range(args.smax + 1):
            t = coaction(e, [g])
            terms = str(t).split(" + ")
            text = " + ".join(terms[: args.terms]) + (f" + ... ({len(terms)} terms)" if len(terms) > args.terms else "")
            print(f"  Psi(Q^{s} {g.name}) = {text}")
            e = free_Q(e)


if __name__ == "__main__":
    main()
