"""Tabulate surface-group cohomology for standard coefficient families.

Prints H^0/H^1/H^2 invariant factors for trivial coefficients across a
(genus, p, level) grid, then the top-degree pairing report per prime.
"""

import argparse
import sys

from flaglift.cohomology import demushkin_report, h_groups
from flaglift.surface import trivial_module
from flaglift.zmod import RingSpec


def fmt(invariants: tuple[int, ...]) -> str:
    return "0" if not invariants else " ".join(str(e) for e in invariants)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-genus", type=int, default=3)
    ap.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5])
    ap.add_argument("--max-level", type=int, default=3)
    args = ap.parse_args()

    print(f"{'genus':>5} {'p':>3} {'level':>5}   {'H0':<8} {'H1':<16} {'H2':<8}")
    for genus in range(1, args.max_genus + 1):
        for p in args.primes:
            for r in range(1, args.max_level + 1):
                rep = h_groups(trivial_module(RingSpec(p, r), genus, 1))
                print(f"{genus:>5} {p:>3} {r:>5}   "
                      f"{fmt(rep.h0.invariants):<8} {fmt(rep.h1.invariants):<16} "
                      f"{fmt(rep.h2.invariants):<8}")

    print("\ntop-degree pairing (mod p):")
    print(f"{'genus':>5} {'p':>3}   {'dim H2':>6} {'gram invertible':>15}")
    ok = True
    for genus in range(1, args.max_genus + 1):
        for p in args.primes:
            rep = demushkin_report(p, genus)
            ok = ok and rep.ok
            print(f"{genus:>5} {p:>3}   {len(rep.h2_invariants):>6} "
                  f"{str(rep.gram_invertible):>15}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
