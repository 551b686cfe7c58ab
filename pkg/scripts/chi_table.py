"""Print the exact weighted count chi(n, m) next to its bound C(n, m)(n/2)^m.

    python scripts/chi_table.py --n-max 12
"""
import argparse
import csv
import sys

from qholo import combinat


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=12)
    ap.add_argument("--ratio", action="store_true", help="also print chi / bound as a float")
    args = ap.parse_args()
    cols = ["n", "m", "chi", "bound", "pass"] + (["ratio"] if args.ratio else [])
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(cols)
    for n in range(1, args.n_max + 1):
        for row in combinat.chi_table(n):
            chi = row["chi_num"] if row["chi_den"] == 1 else f"{row['chi_num']}/{row['chi_den']}"
            line = [n, row["m"], chi, row["bound"], row["pass"]]
            if args.ratio:
                line.append(f"{row['chi_num'] / row['chi_den'] / float(row['bound']):.6f}")
            w.writerow(line)


if __name__ == "__main__":
    main()
