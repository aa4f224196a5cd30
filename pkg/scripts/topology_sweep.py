"""Homology certificate of the suspended real locus over a grid of (g, n).

    python scripts/topology_sweep.py --g-max 5 --n 1 2 4 8
"""

import argparse
import time

from realsplit.topology import certify_splitting


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--g-max", type=int, default=5)
    ap.add_argument("--n", type=int, nargs="+", default=[1, 2, 4, 8])
    args = ap.parse_args()

    failures = 0
    for g in range(1, args.g_max + 1):
        for n in args.n:
            start = time.perf_counter()
            r = certify_splitting(g, n)
            elapsed = time.perf_counter() - start
            failures += not r.passed
            print(f"g={g} n={n:2d}  {'PASS' if r.passed else 'FAIL'}  "
                  f"H~={r.details['suspension_homology']}  summands={r.details['summands']}  "
                  f"{elapsed * 1000:.1f} ms")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
