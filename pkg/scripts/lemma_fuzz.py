"""Seeded fuzzing of the two-partition lemma and of s-independence over several groups.

    python scripts/lemma_fuzz.py --seed 1 --cases 2000 --templates 500
"""

from __future__ import annotations

import argparse
import random
from dataclasses import dataclass

from qdouble.ablinalg import FinAbGroup, solve_ab_system
from qdouble.partition_lemma import (brute_force_solutions, lemma_solvable, random_system, random_template,
                                     s_independence_check)

GROUPS = [(2,), (3,), (4,), (2, 2), (6,), (8,), (2, 4), (12,), (2, 6)]


@dataclass
class FuzzConfig:
    seed: int
    cases: int = 1000
    templates: int = 200
    r_max: int = 4
    n_max: int = 12


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--cases", type=int, default=1000)
    ap.add_argument("--templates", type=int, default=200)
    args = ap.parse_args()
    cfg = FuzzConfig(args.seed, args.cases, args.templates)
    rng = random.Random(cfg.seed)

    print(f"{'B':10s} {'systems':>8s} {'solvable':>9s} {'mismatch':>9s} {'templates':>10s} {'varying':>8s}")
    for moduli in GROUPS:
        B = FinAbGroup(moduli)
        solvable = mismatch = 0
        for _ in range(cfg.cases // len(GROUPS)):
            S = random_system(rng.randint(1, cfg.r_max), B, rng)
            n = brute_force_solutions(S)
            solvable += n > 0
            mismatch += (lemma_solvable(S) != (n > 0)) + (solve_ab_system(S.as_linear_system()).count != n)
        varying = 0
        k = cfg.templates // len(GROUPS)
        for _ in range(k):
            varying += not s_independence_check(random_template(rng, 5, B, cfg.n_max)).constant
        print(f"{str(B):10s} {cfg.cases // len(GROUPS):8d} {solvable:9d} {mismatch:9d} {k:10d} {varying:8d}")


if __name__ == "__main__":
    main()
