"""CI-test counts of the first PC run vs the restricted second run, by level.

    python3 scripts/restricted_cost.py --d 20 --n 1000 --instances 100
"""

import argparse
from collections import Counter

import numpy as np

from autopc.independence import FisherZTest
from autopc.pc import PcConfig, run_pc, run_pc_restricted
from autopc.synth import gen_random_dag, sample_sem


class LevelCounter(FisherZTest):
    """Fisher z test that also tallies calls by conditioning-set size."""

    def __init__(self, data):
        super().__init__(data)
        self.by_level = Counter()

    def test(self, i, j, w=()):
        self.by_level[len(w)] += 1
        return super().test(i, j, w)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=20)
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--alpha", type=float, default=0.05)
    ap.add_argument("--degree", type=float, default=2.0)
    ap.add_argument("--instances", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cfg = PcConfig(args.alpha)
    first, second = [], []
    lv1, lv2 = Counter(), Counter()
    for k in range(args.instances):
        rng = np.random.default_rng(np.random.SeedSequence(args.seed, spawn_key=(k,)))
        data = sample_sem(gen_random_dag(args.d, args.degree, rng), args.n, rng)
        t1, t2 = LevelCounter(data), LevelCounter(data)
        g1, s1 = run_pc(t1, cfg)
        _, s2 = run_pc_restricted(t2, cfg, g1)
        first.append(s1.ci_tests_performed)
        second.append(s2.ci_tests_performed)
        lv1 += t1.by_level
        lv2 += t2.by_level
    first, second = np.array(first), np.array(second)
    print(f"median tests: run1 {np.median(first):.0f}, run2 {np.median(second):.0f}, "
          f"ratio {np.median(second) / np.median(first):.3f}")
    print(f"run2 <= run1 in {np.mean(second <= first):.0%} of instances")
    print("mean tests per level (run1 / run2):")
    for level in sorted(lv1):
        print(f"  |W|={level}: {lv1[level] / args.instances:8.1f} / {lv2[level] / args.instances:8.1f}")


if __name__ == "__main__":
    main()
