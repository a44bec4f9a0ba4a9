"""Shared fixtures, hypothesis strategies, and independent oracles.

The oracles here deliberately avoid the code paths they check: responses are
verified by a linear scan of the defining inequality, mixing optima by full
enumeration of s, and the dual maximum by enumerating its own program.
"""

from __future__ import annotations

import pytest
from hypothesis import strategies as st

from rtmix.core import Task, TaskSystem, ceil_div
from rtmix.mixing import MixInstance


@pytest.fixture
def demo_system() -> TaskSystem:
    """Three-task reference system used throughout the docs."""
    return TaskSystem(
        [
            Task(15, 65, 8, 65),
            Task(7, 30, 5, 30),
            Task(13, 50, 25, 50),
        ]
    )


def workload(tasks, gamma: int, t: int) -> int:
    return gamma + sum(task.c * ceil_div(t + task.jitter, task.p) for task in tasks)


def response_scan_oracle(tasks, gamma: int, hi: int) -> int | None:
    """Least t in [0, hi] satisfying t >= gamma + sum c*ceil((t+jitter)/p)."""
    for t in range(hi + 1):
        if workload(tasks, gamma, t) <= t:
            return t
    return None


def mix_enum_oracle(inst: MixInstance, s_hi: int):
    """(best objective, smallest optimal s) by plain enumeration of s."""
    best_s, best_obj = None, None
    for s in range(s_hi + 1):
        obj = inst.w0 * s + sum(t.w * ceil_div(t.b - s, t.a) for t in inst.terms)
        if best_obj is None or obj < best_obj:
            best_s, best_obj = s, obj
    return best_obj, best_s


def dual_max_oracle(tasks, k: int) -> int:
    """max of t - sum c_i*x_i over t <= k with p_i*x_i >= t + jitter_i, t >= 0.

    For fixed t the best multipliers are the minimal ones, so this is a plain
    scan over t."""
    best = None
    for t in range(k + 1):
        val = t - sum(task.c * ceil_div(t + task.jitter, task.p) for task in tasks)
        if best is None or val > best:
            best = val
    return best


# -- hypothesis strategies ---------------------------------------------------

@st.composite
def small_task_systems(draw, max_n: int = 4, p_max: int = 12, zero_jitter: bool = False):
    n = draw(st.integers(1, max_n))
    tasks = []
    for _ in range(n):
        p = draw(st.integers(1, p_max))
        c = draw(st.integers(1, p))
        jitter = 0 if zero_jitter else draw(st.integers(0, p))
        tasks.append(Task(c, p, jitter, p))
    ts = TaskSystem(tasks)
    hp = sum(t.c / t.p for t in tasks[:-1])
    if hp >= 1:  # keep only instances passing the utilization gate
        from hypothesis import assume

        assume(False)
    return ts


@st.composite
def bounded_mix_instances(draw, max_n: int = 5, a_max: int = 16, harmonic: bool = False):
    from fractions import Fraction

    from hypothesis import assume

    n = draw(st.integers(0, max_n))
    if harmonic:
        caps = []
        cur = draw(st.integers(1, 4))
        for _ in range(n):
            caps.append(cur)
            cur *= draw(st.sampled_from([1, 2, 3]))
            if cur > a_max:
                cur = caps[-1]
    else:
        caps = [draw(st.integers(1, a_max)) for _ in range(n)]
    terms = [
        (draw(st.integers(0, 8)), a, draw(st.integers(-40, 40))) for a in caps
    ]
    inst = MixInstance(1, terms)
    assume(sum(Fraction(w, a) for w, a, _ in terms) <= 1)
    return inst
