#!/usr/bin/env python3
"""Receiver thresholds and direct certificates for Gamma_k with k = 4p^s - 1.

Prints one row per admissible k: the teleportation exponent t, the closed-form
threshold, and the largest receiver count certified by the direct inequality.
"""
import argparse

from zeroerror.bounds import classical_gamma_bound_valid, compound_separation_threshold, gamma_report


def largest_certified(k: int, ell_max: int) -> int:
    best = 0
    for ell in range(1, ell_max + 1):
        if not gamma_report(k, ell).verdict:
            break
        best = ell
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k-max", type=int, default=3000)
    parser.add_argument("--ell-max", type=int, default=64, help="largest receiver count tried directly")
    args = parser.parse_args()
    print(f"{'k':>6} {'p^s':>10} {'t':>4} {'threshold':>10} {'direct':>7}")
    for k in range(7, args.k_max + 1, 4):
        valid, pp = classical_gamma_bound_valid(k)
        if not valid:
            continue
        t = gamma_report(k, 1).values["t"]
        print(f"{k:>6} {f'{pp[0]}^{pp[1]}':>10} {t:>4} {compound_separation_threshold(k):>10} "
              f"{largest_certified(k, args.ell_max):>7}")


if __name__ == "__main__":
    main()
