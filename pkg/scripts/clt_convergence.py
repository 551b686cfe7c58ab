"""Monte Carlo moments of scaled spin variables against the q-Gaussian target.

    python scripts/clt_convergence.py --q 0.5 --n-list 2,4,8,16 --samples 200 --out clt.csv
"""
import argparse
import sys

from qholo import clt


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--poly", default="z1*z2")
    ap.add_argument("--q", default="0.5", help="comma-separated q values")
    ap.add_argument("--r", type=int, default=4)
    ap.add_argument("--n-list", default="2,4,8,16")
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", help="CSV file; one block per q")
    args = ap.parse_args()

    P = clt.parse_poly(args.poly)
    n_list = [int(x) for x in args.n_list.split(",")]
    out = open(args.out, "w") if args.out else None
    for q in (float(x) for x in args.q.replace(" ", "").split(",")):
        rep = clt.convergence_report(P, q, args.r, n_list, args.samples, args.seed, args.workers)
        print(f"q = {q}  P = {rep.polynomial}  r = {rep.r}  target = {rep.target:.6f}")
        for row in rep.rows:
            # bias in units of the standard error shows how far from the limit n still is
            z = row.abs_error / row.stderr if row.stderr else float("inf")
            print(f"  n={row.n:>3}  mean={row.mean:.6f}  se={row.stderr:.6f}  "
                  f"|err|={row.abs_error:.6f}  n*|err|={row.n * row.abs_error:.4f}  {z:.1f} se")
        print(f"  error shrinks: {rep.error_shrinks}  within {rep.band:g} se: {rep.within_band}")
        if out:
            out.write(f"# q={q}\n" + rep.to_csv())
    if out:
        out.close()
        print(f"wrote {args.out}", file=sys.stderr)


if __name__ == "__main__":
    main()
