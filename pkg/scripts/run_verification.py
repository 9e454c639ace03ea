#!/usr/bin/env python3
"""End-to-end verification battery over seeded random configurations.

Runs, at configurable scale:

* the equality family (s+2 points off any (s-1)-flat): regularity index
  must equal the Segre-type bound in every trial;
* the bound family (s+3 equimultiple points off any (s-1)-flat),
  including the two degenerate incidence patterns: the bound must hold;
* the removal recursion on random schemes, every removal choice;
* certificate construction and verification, with the independently
  computed artinian regularity as the soundness reference.

Exit code 0 when every battery is clean, 2 otherwise.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from fractions import Fraction

from fatpoints import linalg
from fatpoints.constructions import (
    build_certificate,
    removal_recursion_check,
    verify_certificate,
)
from fatpoints.generators import PatternSpec
from fatpoints.geometry import ProjPoint
from fatpoints.harness import batch_check
from fatpoints.schemes import FatPointScheme, artinian_quotient_regularity


def batch_battery(name, spec, trials, seed, expect_tight):
    t0 = time.time()
    report = batch_check(spec, trials=trials, base_seed=seed)
    elapsed = time.time() - t0
    bad = report.violations
    if expect_tight:
        bad += sum(1 for r in report.results if r.tight is False)
    status = "ok" if bad == 0 else f"{bad} PROBLEMS"
    print(
        f"  {name:<34} trials={trials:<4} violations={report.violations} "
        f"errors={report.generator_errors} max_reg={report.to_obj()['aggregates']['max_reg']} "
        f"[{elapsed:5.1f}s] {status}"
    )
    return bad == 0


def recursion_battery(trials, base_seed):
    t0 = time.time()
    failures = 0
    for trial in range(trials):
        rng = random.Random(base_seed + trial)
        n = rng.randint(1, 3)
        s = rng.randint(2, 5)
        pts = []
        while len(pts) < s:
            coords = [rng.randint(-9, 9) for _ in range(n + 1)]
            if any(coords):
                p = ProjPoint(tuple(Fraction(c) for c in coords))
                if p not in pts:
                    pts.append(p)
        z = FatPointScheme(n, tuple(pts), tuple(rng.randint(1, 3) for _ in range(s)))
        for i0 in range(s):
            if not removal_recursion_check(z, i0):
                failures += 1
                print(f"    recursion failed: seed={base_seed + trial} removal={i0}")
    elapsed = time.time() - t0
    print(f"  {'removal recursion':<34} trials={trials:<4} failures={failures} [{elapsed:5.1f}s]")
    return failures == 0


def certificate_battery(trials, base_seed):
    t0 = time.time()
    failures = 0
    for trial in range(trials):
        rng = random.Random(base_seed + trial)
        n = rng.randint(2, 4)
        count = rng.randint(2, 4)
        m = rng.randint(1, 3)
        pts = []
        while len(pts) < count + 1:
            coords = [rng.randint(-9, 9) for _ in range(n + 1)]
            if any(coords):
                p = ProjPoint(tuple(Fraction(c) for c in coords))
                if p not in pts:
                    pts.append(p)
        j = FatPointScheme(n, tuple(pts[:count]), (m,) * count)
        p = pts[count]
        cert = build_certificate(j, p, m, seed=base_seed + trial)
        ok, delta = verify_certificate(cert, j, p, m)
        if not ok or artinian_quotient_regularity(j, p, m) > delta:
            failures += 1
            print(f"    certificate failed: seed={base_seed + trial}")
    elapsed = time.time() - t0
    print(
        f"  {'certificate soundness':<34} trials={trials:<4} failures={failures} [{elapsed:5.1f}s]"
    )
    return failures == 0


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=50, help="trials per battery")
    parser.add_argument("--seed", type=int, default=0, help="base seed")
    parser.add_argument("--height", type=int, default=9, help="coordinate height bound")
    parser.add_argument(
        "--pure-rational",
        action="store_true",
        help="disable the certified modular rank filter (slower, same values)",
    )
    args = parser.parse_args()

    linalg.set_modular_filter(not args.pure_rational)
    trials = args.trials
    h = args.height
    print(f"verification batteries: trials={trials}, base_seed={args.seed}, height={h}")

    all_ok = True
    print("equality family (regularity == bound):")
    all_ok &= batch_battery(
        "s+2 points, mixed multiplicities",
        PatternSpec("lemma24", n=3, s=2, mults=(2, 1, 3, 1), height=h),
        trials,
        args.seed,
        expect_tight=True,
    )
    print("bound family (regularity <= bound):")
    for name, spec in [
        ("s+3 equimultiple, generic", PatternSpec("theorem34", n=3, s=3, m=2, height=h)),
        ("planted degenerate flat", PatternSpec("prop43", n=3, s=3, m=2, k=1, height=h)),
        ("two witness flats", PatternSpec("lem42", n=4, s=3, m=2, height=h)),
    ]:
        all_ok &= batch_battery(name, spec, trials, args.seed, expect_tight=False)
    print("cross-verifiers:")
    all_ok &= recursion_battery(max(10, trials // 2), args.seed + 10_000)
    all_ok &= certificate_battery(max(10, trials // 2), args.seed + 20_000)

    print("overall:", "clean" if all_ok else "PROBLEMS FOUND")
    return 0 if all_ok else 2


if __name__ == "__main__":
    sys.exit(main())
