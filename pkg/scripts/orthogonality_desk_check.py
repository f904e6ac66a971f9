"""Search for maximal orthogonal exponential families under alternating signs.

For the unit-run alternating system with s digits and ratio 1/p (gcd(p, s) = 1),
candidate frequencies come from the proven zero superset, windowed to
[-window, window]; the exact clique search then finds the largest family whose
pairwise differences all lie in the zero relation.  With odd s the answer is an
upper bound (superset edges over-approximate); with even s it is exact.

Example:
    python3 scripts/orthogonality_desk_check.py --p 2 --s 3 --window 20
"""

import argparse
import sys
import time
from fractions import Fraction

from specfrac import (
    Alternating,
    is_orthogonal,
    max_orthogonal_family,
    orthogonality_bound,
    superset_candidates,
)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=2, help="reciprocal contraction ratio")
    ap.add_argument("--s", type=int, default=3, help="digit count")
    ap.add_argument("--window", type=Fraction, default=Fraction(20))
    args = ap.parse_args(argv)

    spec = Alternating(Fraction(1, args.p), 1, args.s)
    bound = orthogonality_bound(args.p, args.s)
    cands = superset_candidates(spec, args.window)
    print(f"spec: {spec}")
    print(f"candidates in [-{args.window}, {args.window}]: {len(cands)}")
    print(f"family size bound: {bound}")

    t = time.monotonic()
    res = max_orthogonal_family(spec, cands)
    elapsed = time.monotonic() - t
    verdict = is_orthogonal(spec, res.family)

    print(f"clique search: size {res.size}, {res.nodes_explored} nodes, {elapsed:.2f}s")
    print(f"relation: {res.relation}")
    print(f"family: {', '.join(str(x) for x in res.family)}")
    print(f"verdict: {verdict.status}")
    if bound is not None and res.size > bound:
        print("WARNING: found family exceeds the theoretical bound")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
