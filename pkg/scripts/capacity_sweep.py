#!/usr/bin/env python3
"""Sweep capacity quantities over a noise grid for a channel family and
write a CSV (family,p,quantity,value,err,converged)."""

import argparse
import sys

import numpy as np

from qshannon.capacity import capacity_sweep, sweep_to_csv_rows


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", default="depolarizing",
                    choices=["depolarizing", "erasure"])
    ap.add_argument("--pmin", type=float, default=0.0)
    ap.add_argument("--pmax", type=float, default=0.75)
    ap.add_argument("--points", type=int, default=11)
    ap.add_argument("--which", nargs="+", default=["C1", "CE", "Q1"])
    ap.add_argument("--restarts", type=int, default=6)
    ap.add_argument("--seed", type=int, default=19)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    grid = np.linspace(args.pmin, args.pmax, args.points)
    rows = capacity_sweep(args.family, grid, tuple(args.which),
                          restarts=args.restarts, seed=args.seed)
    text = "\n".join(sweep_to_csv_rows(rows)) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
