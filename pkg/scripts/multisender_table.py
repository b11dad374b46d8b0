#!/usr/bin/env python3
"""Multi-sender separation certificates for Omega_k, k a multiple of four."""
import argparse

from zeroerror.bounds import multisender_separation_report


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k-max", type=int, default=64)
    parser.add_argument("--uses", type=int, nargs="+", default=[1, 2])
    args = parser.parse_args()
    print(f"{'k':>4} {'n':>3} {'certified':>9}  lhs < rhs")
    for k in range(4, args.k_max + 1, 4):
        for n in args.uses:
            r = multisender_separation_report(k, n)
            v = r.values
            print(f"{k:>4} {n:>3} {'yes' if r.verdict else 'no':>9}  {v['lhs']} {'<' if r.verdict else '='} {v['rhs']}")


if __name__ == "__main__":
    main()
