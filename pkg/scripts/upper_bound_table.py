"""Global dimensions of the graded and full endomorphism rings of the tensor generator."""

import argparse
import json
import time

from qci.scalars import Cyclotomic
from qci.towers import upper_bound_report


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cases", default="1:2,1:3,2:2,2:3", help="comma-separated n:a pairs")
    ap.add_argument("--full-end-limit", type=int, default=64)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    rows = []
    for item in args.cases.split(","):
        n, a = (int(t) for t in item.split(":"))
        t0 = time.perf_counter()
        rep = upper_bound_report(n, a, Cyclotomic(a), full_end_limit=args.full_end_limit)
        rep["seconds"] = round(time.perf_counter() - t0, 2)
        rows.append(rep)
    if args.json:
        print(json.dumps(rows, indent=2, default=str))
        return
    print(f"{'n':>2} {'a':>2} {'dim M':>6} {'grEnd':>6} {'gldim':>6} {'2n':>3} {'fullEnd':>8} {'gldim':>6} {'s':>6}")
    for r in rows:
        full = r["full_end"]
        fg = "skip" if full["skipped"] else str(full["gldim"])
        print(
            f"{r['n']:>2} {r['a']:>2} {r['dim_M']:>6} {r['dim_End']:>6} {str(r['gldim']):>6} "
            f"{r['bound_2n']:>3} {full['dim_End']:>8} {fg:>6} {r['seconds']:>6}"
        )


if __name__ == "__main__":
    main()
