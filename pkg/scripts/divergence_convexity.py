"""Show D_phi(x | mu) at alpha = 2/3 failing convexity in mu while D_psi stays convex.

Prints a CSV of D_phi(2 | mu) over mu and, on stderr, the midpoint check
between mu = -4 and mu = -1.
"""

import argparse
import csv
import sys
from fractions import Fraction

import numpy as np

from bregman_tweedie import BaseFunction, bregman_div


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--alpha", default="2/3")
    p.add_argument("--x", type=float, default=2.0)
    p.add_argument("--mu-min", type=float, default=-5.0)
    p.add_argument("--mu-max", type=float, default=5.0)
    p.add_argument("--steps", type=int, default=101)
    args = p.parse_args(argv)

    a = Fraction(args.alpha)
    f_phi, f_psi = BaseFunction.phi(a), BaseFunction.psi(a)
    mus = np.linspace(args.mu_min, args.mu_max, args.steps)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["mu", "D_phi", "D_psi"])
    for mu in mus:
        w.writerow([repr(float(mu)), repr(float(bregman_div(f_phi, args.x, mu))), repr(float(bregman_div(f_psi, args.x, mu)))])

    mid = bregman_div(f_phi, args.x, -2.5)
    avg = (bregman_div(f_phi, args.x, -4.0) + bregman_div(f_phi, args.x, -1.0)) / 2
    verdict = "violated" if mid > avg else "holds"
    print(f"D_phi(x|-2.5) = {mid:.12g}, mean of D_phi(x|-4), D_phi(x|-1) = {avg:.12g}: midpoint convexity {verdict}",
          file=sys.stderr)


if __name__ == "__main__":
    main()
