"""Tabulate spectrality decisions for alternating-sign systems.

Rows are (m, N) digit structures, columns are reciprocal ratios 1/k; each
cell shows whether the invariant measure admits an exponential orthogonal
basis (the divisibility rule 2Nm | k).

Example:
    python3 scripts/spectrality_table.py --max-m 3 --max-n 3 --max-k 12
"""

import argparse
import sys
from fractions import Fraction

from specfrac import spectrality_decision


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-m", type=int, default=2)
    ap.add_argument("--max-n", type=int, default=2)
    ap.add_argument("--min-k", type=int, default=2)
    ap.add_argument("--max-k", type=int, default=9)
    ap.add_argument("--reasons", action="store_true", help="print one reason per row")
    args = ap.parse_args(argv)

    ks = list(range(args.min_k, args.max_k + 1))
    header = "  m  N | " + " ".join(f"{k:>3}" for k in ks)
    print(header)
    print("-" * len(header))
    for m in range(1, args.max_m + 1):
        for n in range(1, args.max_n + 1):
            cells = []
            sample_reason = None
            for k in ks:
                dec = spectrality_decision(m, n, Fraction(1, k))
                cells.append("  *" if dec.spectral else "  .")
                if sample_reason is None and not dec.spectral:
                    sample_reason = dec.reason
            line = f"{m:>3} {n:>2} | " + " ".join(cells)
            if args.reasons and sample_reason:
                line += f"   e.g. {sample_reason}"
            print(line)
    print("\n* spectral, . not spectral (rule: 2Nm | 1/rho)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
