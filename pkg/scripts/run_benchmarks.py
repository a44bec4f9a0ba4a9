#!/usr/bin/env python3
"""Operation-counter sweeps for the harmonic response-time walk.

Reproduces the scaling experiment behind the complexity smoke test: total
mixing-solver operations for the walk on seeded random harmonic systems,
swept over p_max at fixed n and over n at fixed p_max.  Full-jitter variants
pin the difference count q to zero, isolating the binary-search term.
"""

import argparse

from rtmix import counters, gen, rta
from rtmix.core import Task, TaskSystem


def full_jitter(ts: TaskSystem) -> TaskSystem:
    return TaskSystem([Task(t.c, t.p, t.p, None) for t in ts.tasks])


def walk_ops(n: int, p_max: int, seeds, pin_q: bool) -> tuple[int, int]:
    ops = probes = 0
    for seed in seeds:
        ts = gen.random_system(seed * 37 + n * 5 + p_max, n, p_max, harmonic=True)
        if pin_q:
            ts = full_jitter(ts)
        q = rta.ResponseQuery(ts, range(len(ts.tasks) - 1), ts.tasks[-1].c)
        with counters.collect() as c:
            rta.response_harmonic(q)
        ops += c.mixing_ops
        probes += c.decision_probes
    return ops, probes


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=24)
    parser.add_argument("--random-jitter", action="store_true",
                        help="draw jitters uniformly instead of pinning q = 0")
    args = parser.parse_args()
    seeds = range(args.seeds)
    pin_q = not args.random_jitter

    print(f"# seeds per cell: {args.seeds}; q pinned to 0: {pin_q}")
    print("\n## p_max sweep at n = 4")
    print(f"{'p_max':>8} {'mixing_ops':>12} {'probes':>8}")
    for p_max in (16, 32, 64, 128, 256, 512):
        ops, probes = walk_ops(4, p_max, seeds, pin_q)
        print(f"{p_max:>8} {ops:>12} {probes:>8}")

    print("\n## n sweep at p_max = 64")
    print(f"{'n':>8} {'mixing_ops':>12} {'probes':>8}")
    for n in (2, 3, 4, 5, 6, 7, 8):
        ops, probes = walk_ops(n, 64, seeds, pin_q)
        print(f"{n:>8} {ops:>12} {probes:>8}")


if __name__ == "__main__":
    main()
