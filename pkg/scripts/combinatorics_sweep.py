"""Euler-Poincare polynomials p(d, n): largest root, even-d factorization, quintic factor.

    python scripts/combinatorics_sweep.py --d-max 100 --csv sweep.csv
"""

import argparse
import time

from zonelab import exactcomb as E


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--d-max", type=int, default=100)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()

    for d in range(3, 7):
        print(f"p({d}, n) = {E.euler_poincare_polynomial(d)}")
    print("matches published factorizations:", E.verify_paper_factorizations())
    rep = E.quintic_cubic_factor_report()
    lo, hi = rep["isolating_interval"]
    print(f"n^3 - n^2 - 2n - 8: {rep['real_roots']} real root in [{float(lo):.9f}, {float(hi):.9f}]")

    t0 = time.perf_counter()
    rows = E.combinatorics_report(args.d_max)
    bad = [r["d"] for r in rows if not r["largest_root_is_d"]]
    conj = [r["d"] for r in rows if r["even_conjecture"] is False]
    print(f"3 <= d <= {args.d_max}: largest real root = d fails for {bad or 'none'}; "
          f"even-d factorization fails for {conj or 'none'} ({time.perf_counter() - t0:.1f}s)")
    if args.csv:
        E.write_report_csv(rows, args.csv)


if __name__ == "__main__":
    main()
