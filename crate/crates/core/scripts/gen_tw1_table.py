#!/usr/bin/env python3
"""Tabulate the GOE Tracy-Widom cdf F1 on a uniform grid.

F1(s) = det(I - K_s) on L2(0, inf) with K_s(x, y) = Ai(s + (x + y) / 2) / 2,
discretised with Gauss-Legendre quadrature on a truncated interval.

Usage: gen_tw1_table.py OUT [--lo -10] [--hi 9] [--step 0.01] [--nodes 160]
"""
import argparse
import hashlib

import numpy as np
from scipy.special import airy


def f1(s, nodes):
    # Ai(s + x) is below 1e-30 once s + x > 18; truncate there.
    upper = max(18.0 - s, 4.0)
    t, w = np.polynomial.legendre.leggauss(nodes)
    x = 0.5 * upper * (t + 1.0)
    w = 0.5 * upper * w
    sw = np.sqrt(w)
    ai = airy(s + 0.5 * (x[:, None] + x[None, :]))[0]
    k = 0.5 * sw[:, None] * ai * sw[None, :]
    sign, logdet = np.linalg.slogdet(np.eye(nodes) - k)
    if sign <= 0:
        raise ValueError(f"non-positive determinant at s={s}")
    return float(np.exp(logdet))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out")
    ap.add_argument("--lo", type=float, default=-10.0)
    ap.add_argument("--hi", type=float, default=9.0)
    ap.add_argument("--step", type=float, default=0.01)
    ap.add_argument("--nodes", type=int, default=160)
    args = ap.parse_args()

    count = int(round((args.hi - args.lo) / args.step)) + 1
    lines = ["# tw1 cdf table v1", "# x cdf"]
    for i in range(count):
        s = args.lo + i * args.step
        lines.append(f"{s:.4f} {f1(s, args.nodes):.17e}")
    body = "\n".join(lines) + "\n"
    with open(args.out, "w") as fh:
        fh.write(body)
    print(hashlib.sha256(body.encode()).hexdigest())


if __name__ == "__main__":
    main()
