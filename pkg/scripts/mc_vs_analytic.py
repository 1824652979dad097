#!/usr/bin/env python3
"""Compare seeded Maxwell samples with the closed-form results."""
import argparse
import math

import numpy as np

from maxkin import (
    MaxwellParams,
    SeedSpec,
    empirical_tail_fraction,
    ks_statistic,
    mean_kinetic_energy,
    sample_batch,
    tail_fraction,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=10**6)
    ap.add_argument("--c", type=float, default=0.5)
    ap.add_argument("--mass", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    p = MaxwellParams(args.c)
    batch = sample_batch(args.n, p, SeedSpec(args.seed), workers=args.workers)
    v = batch.velocities
    kt = args.mass / (2 * args.c)

    e_mc = 0.5 * args.mass * np.mean(np.einsum("ij,ij->i", v, v))
    e_an = mean_kinetic_energy(p, args.mass)
    print(f"n = {args.n}, c = {args.c:g}, m = {args.mass:g}, seed = {args.seed}")
    print(f"mean energy  MC {e_mc:.6f}  analytic {e_an:.6f}  rel diff {e_mc / e_an - 1:+.2e}")

    print(f"{'lambda':>7} {'MC':>10} {'Q(3/2,lam)':>11} {'z':>7}")
    for lam in (0.5, 1.0, 2.0, 4.0, 8.0):
        q = tail_fraction(lam)
        f = empirical_tail_fraction(batch, lam * kt, args.mass)
        se = math.sqrt(q * (1 - q) / args.n)
        print(f"{lam:>7g} {f:>10.6f} {q:>11.6f} {(f - q) / se:>+7.2f}")

    d = ks_statistic(batch)
    crit = 1.63 / math.sqrt(args.n)
    print(f"KS D = {d:.5f}, 1% critical value {crit:.5f} -> {'pass' if d < crit else 'fail'}")


if __name__ == "__main__":
    main()
