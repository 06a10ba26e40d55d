#!/usr/bin/env python3
"""Reproduce the headline tables: exception counts, the admissible signature
set, the r = s = 2 slice, the Robin violators among sums of two squares, the
signature-size ceilings, and the e^gamma approach of the witness sequence.

Usage: python scripts/reproduce_tables.py [--skip-crossvalidate]
"""

import argparse
import time

from nicrobin import (
    A2PLUS3B2,
    MOD4,
    compute_X,
    cross_validate,
    egamma,
    enumerate_exceptions,
    kbound_constants,
    limsup_witness,
)


def hrule(title):
    print()
    print(f"--- {title} " + "-" * max(0, 60 - len(title)))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--skip-crossvalidate", action="store_true")
    args = parser.parse_args()

    hrule("admissible signatures (mod4)")
    pairs = compute_X(MOD4)
    print(f"{len(pairs.pairs)} pairs, max r + 2s = {pairs.max_r_plus_2s}, "
          f"max r + s = {pairs.max_omega}")
    print(" ".join(f"({r},{s})" for r, s in pairs.sorted_pairs()))

    hrule("signature ceilings (mod4)")
    a, b = kbound_constants(MOD4)
    print(f"ceilings {a} and {b}; both < max_k = {MOD4.search.max_k}")

    for config, expect_rep in ((MOD4, "sums of two squares"),
                               (A2PLUS3B2, "values of a^2 + 3 b^2")):
        hrule(f"exception set ({config.name})")
        t0 = time.time()
        exc = enumerate_exceptions(config)
        reps = exc.filtered(representable_only=True)
        print(f"{len(exc)} violators in the constraint set ({time.time() - t0:.2f}s)")
        print(f"{len(reps)} of them are {expect_rep}; largest:")
        print(f"  {reps[-1].value} = {reps[-1].n}")
        print(f"digest {exc.digest()}")
        if config is MOD4:
            rs22 = [r.value for r in exc.records if (r.omega_p, r.omega_q) == (2, 2)]
            print(f"r = s = 2 slice ({len(rs22)} values): {rs22}")
            robin = [r.value for r in exc.filtered(robin_only=True, representable_only=True)]
            print(f"Robin violators among sums of two squares: {robin}")

    hrule("witness ratios approaching e^gamma")
    eg = egamma(96)
    print(f"e^gamma in [{eg.lo}, {eg.hi}]")
    for n in (1000, 10000, 100000):
        ratio_sigma, ratio_phi = limsup_witness(n)
        dist = eg.sub(ratio_phi)
        print(f"  n = {n:>6}:  phi-ratio ~ {float(ratio_phi.lo):.6f}  "
              f"|e^gamma - ratio| ~ {float(dist.lo):.6f}")

    if not args.skip_crossvalidate:
        hrule("oracle cross-validation")
        for config in (MOD4, A2PLUS3B2):
            for bound in (10**6, 10**7):
                rep = cross_validate(bound, config)
                print(f"  {config.name} to {bound:>9}: agreement = {rep.agreement} "
                      f"(brute {rep.brute_seconds}s)")


if __name__ == "__main__":
    main()
