"""Tabulate H-Bregman and L-Bregman losses next to the logistic and hinge losses.

Writes CSV with one column per loss, ready for external plotting. A cell is
empty where the margin is outside the loss's domain.
"""

import argparse
import csv
import sys

import numpy as np

from bregman_tweedie import Mode, bt_loss, higher_order_hinge, make_spec
from bregman_tweedie.errors import DomainError


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--m-min", type=float, default=-3.0)
    p.add_argument("--m-max", type=float, default=3.0)
    p.add_argument("--steps", type=int, default=121)
    p.add_argument("--alphas", default="2/3,4/5,58/59,84/85", help="comma separated even/odd alphas below 1")
    args = p.parse_args(argv)

    m = np.linspace(args.m_min, args.m_max, args.steps)
    cols = {}
    for a in args.alphas.split(","):
        for mode, tag in ((Mode.HBREGMAN, "HB"), (Mode.LBREGMAN, "LB")):
            spec = make_spec(a.strip(), mode)
            vals = []
            for mi in m:
                try:
                    vals.append(float(bt_loss(spec, mi)))
                except DomainError:
                    vals.append(None)
            cols[f"{tag} {a.strip()}"] = vals
    cols["logistic"] = list(np.log1p(np.exp(-m)))
    cols["hinge"] = list(higher_order_hinge(0, 1.0, m))
    cols["squared hinge"] = list(higher_order_hinge("1/2", 0.25, m))

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["m", *cols])
    for i, mi in enumerate(m):
        w.writerow([repr(float(mi))] + ["" if v[i] is None else repr(float(v[i])) for v in cols.values()])


if __name__ == "__main__":
    main()
