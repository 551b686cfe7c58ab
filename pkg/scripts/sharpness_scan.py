"""Scan the contraction time of the witness and the worst ensemble margin around t_J.

    python scripts/sharpness_scan.py --r 4,6,8 --samples 50
"""
import argparse
import math

import numpy as np

from qholo import holo, qfock
from qholo.holo import DoubledSpin, hypercontractivity_check, janson_time, random_holo_poly
from qholo.spin import SpinMatrix


def spin_margin(r, t, samples, rng):
    worst = -math.inf
    for _ in range(samples):
        sp = SpinMatrix.random(int(rng.integers(1, 4)), float(rng.uniform(-1, 1)), rng)
        c = hypercontractivity_check(random_holo_poly(DoubledSpin(sp), rng), r, t)
        worst = max(worst, c.lhs - c.rhs)
    return worst


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", default="4,6,8")
    ap.add_argument("--samples", type=int, default=50)
    ap.add_argument("--offsets", default="-0.1,-0.05,-0.01,0,0.05")
    ap.add_argument("--q", default="-0.5,0,0.5", help="q values for the Fock-side witness")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rs = [int(x) for x in args.r.split(",")]
    offsets = [float(x) for x in args.offsets.split(",")]
    qs = [float(x) for x in args.q.split(",")]
    rng = np.random.default_rng(args.seed)

    print(f"{'r':>3} {'t_J':>10} {'witness t*':>12} {'p/8 ratio':>10}")
    for r in rs:
        ratio = holo.sharpness_witness(1e-3, r) / (r / 8)
        print(f"{r:>3} {janson_time(2, r):>10.6f} {holo.least_contraction_time(r):>12.6f} {ratio:>10.5f}")

    print("\nworst lhs - rhs over random spin polynomials")
    print(f"{'r':>3} " + " ".join(f"{o:>+11.3f}" for o in offsets))
    for r in rs:
        vals = [spin_margin(r, max(0.0, janson_time(2, r) + o), args.samples, rng) for o in offsets]
        print(f"{r:>3} " + " ".join(f"{v:>11.3e}" for v in vals))

    print("\nq-Fock witness 1 + eps Z (eps = 1e-3), lhs - rhs")
    print(f"{'q':>5} {'r':>3} " + " ".join(f"{o:>+11.3f}" for o in offsets))
    w = qfock.z_witness(1e-3)
    for q in qs:
        for r in (4, 6):
            vals = []
            for o in offsets:
                c = qfock.contraction_check(w, r, q, max(0.0, janson_time(2, r) + o))
                vals.append(c.lhs - c.rhs)
            print(f"{q:>5} {r:>3} " + " ".join(f"{v:>11.3e}" for v in vals))


if __name__ == "__main__":
    main()
