"""Sweep a measure transform over a window and summarize where it dips.

Example:
    python3 scripts/sweep_transform.py --preset quarter --to 20 --points 2000
    python3 scripts/sweep_transform.py --alternating 1/2,1,3 --points 500 --csv out.csv
"""

import argparse
import csv
import sys
from fractions import Fraction

from specfrac import (
    Alternating,
    SelfSimilar,
    consecutive,
    digit_set,
    ft_measure,
    parse_rational,
)

PRESETS = {
    "quarter": SelfSimilar(Fraction(1, 4), consecutive(2).scaled(2)),
    "third": SelfSimilar(Fraction(1, 3), consecutive(2).scaled(2)),
    "fifth": SelfSimilar(Fraction(1, 5), consecutive(5)),
}


def build_spec(args):
    if args.alternating:
        rho, m, n = args.alternating.split(",")
        return Alternating(parse_rational(rho), int(m), int(n))
    if args.digits:
        rho = parse_rational(args.rho)
        return SelfSimilar(rho, digit_set([parse_rational(d) for d in args.digits.split(",")]))
    return PRESETS[args.preset]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--preset", choices=sorted(PRESETS), default="quarter")
    ap.add_argument("--alternating", help="rho,period,count (overrides preset)")
    ap.add_argument("--rho", help="contraction ratio for --digits")
    ap.add_argument("--digits", help="comma-separated digit list for --rho")
    ap.add_argument("--from", dest="lo", default="0", type=parse_rational)
    ap.add_argument("--to", dest="hi", default="10", type=parse_rational)
    ap.add_argument("--points", type=int, default=1000)
    ap.add_argument("--tol", type=float, default=1e-9)
    ap.add_argument("--csv", help="write xi,re,im,abs,error_bound rows here")
    ap.add_argument("--dips", type=int, default=10, help="how many smallest |ft| to report")
    args = ap.parse_args(argv)

    spec = build_spec(args)
    step = (args.hi - args.lo) / max(args.points - 1, 1)
    grid = [args.lo + step * i for i in range(args.points)]

    rows = []
    for x in grid:
        cc = ft_measure(spec, x, args.tol)
        rows.append((x, cc.value.real, cc.value.imag, abs(cc.value), cc.error_bound))

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["xi", "re", "im", "abs", "error_bound"])
            for x, re_, im, ab, eb in rows:
                w.writerow([x, repr(re_), repr(im), repr(ab), repr(eb)])
        print(f"wrote {len(rows)} rows to {args.csv}")

    exact_zeros = sum(1 for r in rows if r[3] == 0 and r[4] == 0)
    print(f"spec: {spec}")
    print(f"grid: [{args.lo}, {args.hi}] with {args.points} points, tol {args.tol:g}")
    print(f"exact zeros on grid: {exact_zeros}")
    print(f"{args.dips} smallest |ft| values:")
    for x, _, _, ab, eb in sorted(rows, key=lambda r: r[3])[: args.dips]:
        print(f"  xi = {str(x):>12}   |ft| = {ab:.6e}   bound = {eb:.1e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
