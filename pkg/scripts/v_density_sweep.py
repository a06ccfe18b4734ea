"""Density of V (w_alpha outside sigma*L + L*sigma) across small even codimensions.

Prints a table; pass --json for machine-readable rows.
"""

import argparse
import json
import random

from qci.algebra import homogeneous
from qci.certificates import sample_alpha, v_membership
from qci.scalars import parse_field


def sweep(n, a, field, trials, seed):
    p = homogeneous(n, a, parse_field(field))
    rng = random.Random(seed)
    outside = certified = 0
    for _ in range(trials):
        rep = v_membership(p, sample_alpha(p, rng))
        outside += not rep.member
        certified += bool(rep.lambda_coefficient)
    return {"n": n, "a": a, "field": field, "trials": trials, "density_V": outside / trials, "certified": certified / trials}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    cases = [(2, 2, "p:5"), (2, 3, "p:7"), (4, 2, "p:5"), (4, 3, "p:7"), (6, 2, "p:5"), (4, 2, "cyclo:2")]
    rows = [sweep(n, a, f, args.trials, args.seed) for n, a, f in cases]
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'n':>2} {'a':>2} {'field':>8} {'V':>6} {'cert':>6}")
    for r in rows:
        print(f"{r['n']:>2} {r['a']:>2} {r['field']:>8} {r['density_V']:>6.3f} {r['certified']:>6.3f}")


if __name__ == "__main__":
    main()
