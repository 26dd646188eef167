#!/usr/bin/env python3
"""Scan the Ising-like q=2 model across coupling strengths.

For each value of beta*J' the translation-invariant recursion h = k*F(h) is
solved from many starts; the number of solutions jumps from 1 to 3 at the
tree critical point k*tanh(beta*J') = 1 (beta*J' = atanh(1/k)).
"""

import argparse
import math
from fractions import Fraction

import numpy as np

from treegibbs import potts_model, ti_fixed_points


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--min", type=float, default=0.1)
    ap.add_argument("--max", type=float, default=1.2)
    ap.add_argument("--steps", type=int, default=23)
    ap.add_argument("--starts", type=int, default=16)
    args = ap.parse_args()

    critical = math.atanh(1.0 / args.k)
    print(f"# k = {args.k}, predicted critical beta*J' = {critical:.6f}")
    print("beta_jp,solutions,largest_field")
    for beta_jp in np.linspace(args.min, args.max, args.steps):
        # beta = 1, J' = J/2 for q=2, so J = 2*beta_jp
        model = potts_model(2, 2.0 * beta_jp, 1, args.k)
        result = ti_fixed_points(model, starts=args.starts)
        largest = max((abs(s[0]) for s in result.solutions), default=float("nan"))
        print(f"{beta_jp:.4f},{len(result.solutions)},{largest:.8f}")


if __name__ == "__main__":
    main()
