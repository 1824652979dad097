#!/usr/bin/env python3
"""Mean squared displacement of lattice walks against n * step_length**2."""
import argparse

from maxkin import SeedSpec, WalkSpec, simulate_walks


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, nargs="+", default=[10, 50, 100, 200, 400])
    ap.add_argument("--dim", type=int, default=1, choices=(1, 2, 3))
    ap.add_argument("--trials", type=int, default=10**5)
    ap.add_argument("--step-length", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"dim = {args.dim}, trials = {args.trials}, step length = {args.step_length:g}")
    print(f"{'steps':>6} {'MSD':>11} {'expected':>9} {'SE':>8} {'z':>6}  drift")
    for i, n in enumerate(args.steps):
        spec = WalkSpec(n, args.dim, args.step_length, args.trials, SeedSpec(args.seed, i))
        s = simulate_walks(spec)
        expected = n * args.step_length ** 2
        se = s.standard_error()
        drift = " ".join(f"{m:+.3f}" for m in s.mean_displacement)
        print(f"{n:>6} {s.mean_squared_displacement:>11.3f} {expected:>9.1f} {se:>8.3f} "
              f"{(s.mean_squared_displacement - expected) / se:>+6.2f}  {drift}")


if __name__ == "__main__":
    main()
