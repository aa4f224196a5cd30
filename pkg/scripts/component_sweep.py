"""Component counts of real CM abelian varieties over the two closed-form families.

    python scripts/component_sweep.py --d-min -50 --k-max 40
"""

import argparse

from realsplit.real_locus import (
    all_components_connected_iff,
    cyclotomic_cm_data,
    gamma_possibilities,
    is_squarefree,
    quadratic_cm_data,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d-min", type=int, default=-50)
    ap.add_argument("--k-max", type=int, default=30)
    args = ap.parse_args()

    print("imaginary quadratic fields Q(sqrt(d))")
    for d in range(-1, args.d_min, -1):
        if not is_squarefree(d):
            continue
        data = quadratic_cm_data(d, require_epsilon=False)
        p = data.primes_over_two[0]
        counts = sorted(gamma_possibilities(data))
        print(f"  d={d:4d}  d mod 4={d % 4}  ord_2(disc)={p.ord_disc}  n in {counts}")

    print("cyclotomic fields Q(zeta_k)")
    for k in range(3, args.k_max + 1):
        if k % 4 == 2:
            continue
        data = cyclotomic_cm_data(k, require_epsilon=False)
        counts = sorted(gamma_possibilities(data))
        shape = ", ".join(f"(ord={p.ord_disc}, f={p.residue_degree})" for p in data.primes_over_two)
        print(f"  k={k:3d}  g={data.g:3d}  connected={all_components_connected_iff(data)!s:5}  "
              f"n in {counts}  primes over 2: {shape}")


if __name__ == "__main__":
    main()
