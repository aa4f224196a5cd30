"""Print the projector family for small g and time its verification.

    python scripts/dm_table.py --g-max 4 --n-min -3 --n-max 3
"""

import argparse
import time

from realsplit.correspondence import CorrAlgebra, dm_projectors, verify_dm


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--g-max", type=int, default=3)
    ap.add_argument("--n-min", type=int, default=-3)
    ap.add_argument("--n-max", type=int, default=3)
    ap.add_argument("--show", action="store_true", help="print every projector in u = t - 1")
    args = ap.parse_args()

    for g in range(1, args.g_max + 1):
        alg = CorrAlgebra(g)
        if args.show:
            for i, pi in enumerate(dm_projectors(alg).projectors):
                print(f"g={g} pi_{i} = {pi}")
        start = time.perf_counter()
        report = verify_dm(alg, range(args.n_min, args.n_max + 1))
        elapsed = time.perf_counter() - start
        checks = " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in report.checks.items())
        print(f"g={g}  {elapsed * 1000:7.1f} ms  {checks}")


if __name__ == "__main__":
    main()
