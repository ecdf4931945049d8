"""Thin random zones: empirical maximum multiplicity against k(n).

Sweeps n for alpha(n) = n^-(1+delta) (k = d) or alpha(n) = 1/n
(k = B_d ln n / ln ln n) and prints one line per n.

    python scripts/run_corollary.py --delta 3 --n 100 200 400 --trials 100
    python scripts/run_corollary.py --one-over-n --n 200 1000 --trials 20
"""

import argparse

from zonelab import montecarlo as M


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--n", type=int, nargs="+", default=[100, 200, 400])
    ap.add_argument("--delta", type=float, default=3.0)
    ap.add_argument("--one-over-n", action="store_true")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=9)
    args = ap.parse_args()

    print("n      k      ok_fraction  histogram")
    for n in args.n:
        if args.one_over_n:
            p = M.ExperimentParams(args.d, n, alpha_kind="one_over_n", k_rule="B_d_log_over_loglog", trials=args.trials, master_seed=args.seed)
        else:
            p = M.ExperimentParams(args.d, n, alpha_kind="power_law", delta=args.delta, k_rule="constant", k_const=args.d, trials=args.trials, master_seed=args.seed)
        s = M.run_corollary_experiment(p)
        print(f"{n:<6d} {s['k_bound']:<6.2f} {s['multiplicity_ok_fraction']:<12.3f} {s['max_multiplicity_histogram']}  [{s['multiplicity_engine']}]")


if __name__ == "__main__":
    main()
