#!/usr/bin/env python3
"""Fever sensitivity of the fast fraction across baseline fractions.

Prints lambda and the relative change for a 1 K rise under both tail models.
"""
import argparse

from maxkin import TailModel, fever_report


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--t-base", type=float, default=310.0)
    ap.add_argument("--t-new", type=float, default=311.0)
    ap.add_argument("--fractions", type=float, nargs="+",
                    default=[1e-3, 1e-6, 1e-9, 1e-12, 1e-15, 1e-18])
    args = ap.parse_args()

    print(f"T: {args.t_base:g} K -> {args.t_new:g} K")
    print(f"{'baseline':>10} {'lam exp':>9} {'change exp':>11} {'lam exact':>10} {'change exact':>13}")
    for f in args.fractions:
        e = fever_report(args.t_base, args.t_new, f, TailModel.EXPONENTIAL)
        x = fever_report(args.t_base, args.t_new, f, TailModel.EXACT)
        print(f"{f:>10.0e} {e.lambda_base:>9.4f} {e.percent_change:>+10.3f}% "
              f"{x.lambda_base:>10.4f} {x.percent_change:>+12.3f}%")


if __name__ == "__main__":
    main()
