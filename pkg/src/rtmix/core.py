"""Sporadic task-system model and exact response-time bounds.

Tasks are quadruples (c, d, p, jitter) of integers: worst-case execution
time, relative deadline (optional for pure response-time computation),
minimum inter-arrival separation, and release jitter.  Priority is list
order, index 0 highest.

All utilization and bound arithmetic is exact: `fractions.Fraction`
throughout, never floats.  Feasibility decisions in the solver modules rely
on the integrality arguments behind these bounds, which a rounding error
would silently break.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    InternalInvariantViolated,
    InvalidInstance,
    OverflowLimit,
    PreconditionViolated,
    UtilizationExceeded,
)

# Exact rational type used for every fractional quantity in the package.
Rational = Fraction

ENV_LIMIT_BITS = "RTMIX_LIMIT_BITS"
DEFAULT_LIMIT_BITS = 63


def magnitude_cap() -> int:
    """Cap on lcm-style quantities; exceeding it raises OverflowLimit.

    Defaults to 2**63 - 1; override with the RTMIX_LIMIT_BITS environment
    variable.  lcm is exponential in the number of distinct periods, so a
    hard cap beats silent astronomically-large searches.
    """
    bits = int(os.environ.get(ENV_LIMIT_BITS, DEFAULT_LIMIT_BITS))
    if bits < 1:
        raise InvalidInstance(f"{ENV_LIMIT_BITS} must be a positive bit count, got {bits}")
    return (1 << bits) - 1


def ceil_div(num: int, den: int) -> int:
    """Exact ceil(num / den) for integer num and positive integer den."""
    if den <= 0:
        raise ValueError(f"ceil_div needs a positive denominator, got {den}")
    return -((-num) // den)


def ceil_frac(x: Fraction | int) -> int:
    """Exact integer ceiling of a rational."""
    return math.ceil(x)


def lcm_capped(values: Iterable[int], cap: int | None = None) -> int:
    """lcm of positive integers, raising OverflowLimit past the magnitude cap."""
    limit = magnitude_cap() if cap is None else cap
    acc = 1
    for v in values:
        if v < 1:
            raise InvalidInstance(f"lcm argument must be >= 1, got {v}")
        acc = math.lcm(acc, v)
        if acc > limit:
            raise OverflowLimit(f"lcm exceeds the magnitude cap {limit}")
    return acc


@dataclass(frozen=True)
class Task:
    """One sporadic task: cost c, period p, release jitter, optional deadline."""

    c: int
    p: int
    jitter: int = 0
    d: int | None = None


@dataclass(frozen=True)
class TaskSystem:
    """Priority-ordered task list; index 0 is the highest priority."""

    tasks: tuple[Task, ...]

    def __init__(self, tasks: Iterable[Task]):
        object.__setattr__(self, "tasks", tuple(tasks))

    def __len__(self) -> int:
        return len(self.tasks)

    def periods(self) -> tuple[int, ...]:
        return tuple(t.p for t in self.tasks)


def validate(ts: TaskSystem) -> None:
    """Check every structural invariant; raise InvalidInstance naming the first violation."""
    if not isinstance(ts, TaskSystem):
        raise InvalidInstance("expected a TaskSystem")
    if len(ts.tasks) < 1:
        raise InvalidInstance("task system must contain at least one task")
    for idx, t in enumerate(ts.tasks):
        for name in ("c", "p", "jitter"):
            if not isinstance(getattr(t, name), int):
                raise InvalidInstance(f"task {idx}: field {name} must be an integer")
        if t.c < 1:
            raise InvalidInstance(f"task {idx}: execution time must satisfy c >= 1, got {t.c}")
        if t.p < 1:
            raise InvalidInstance(f"task {idx}: period must satisfy p >= 1, got {t.p}")
        if not 0 <= t.jitter <= t.p:
            raise InvalidInstance(
                f"task {idx}: jitter must satisfy 0 <= jitter <= p, got {t.jitter} (p={t.p})"
            )
        if t.d is not None:
            if not isinstance(t.d, int):
                raise InvalidInstance(f"task {idx}: deadline must be an integer or None")
            if not t.c <= t.d <= t.p:
                raise InvalidInstance(
                    f"task {idx}: deadline must satisfy c <= d <= p, got {t.d}"
                )


def utilization(ts: TaskSystem, exclude_last: bool = False) -> Fraction:
    """Exact sum of c_i/p_i, optionally over the higher-priority prefix only."""
    tasks = ts.tasks[:-1] if exclude_last else ts.tasks
    return sum((Fraction(t.c, t.p) for t in tasks), Fraction(0))


@dataclass(frozen=True)
class UtilizationReport:
    higher_priority: Fraction         # sum over i < n
    total: Fraction                   # sum over i <= n
    schedulability_bound_holds: bool  # total <= 1


def check_general_utilization_bound(ts: TaskSystem) -> UtilizationReport:
    """Require sum_{i<n} c_i/p_i < 1; report whether the total stays <= 1.

    By integrality the strict bound is equivalent to
    sum_{i<n} c_i/p_i <= 1 - 1/lcm_{i<n} p_i, so no lcm is computed here.
    """
    hp = utilization(ts, exclude_last=True)
    if hp >= 1:
        raise UtilizationExceeded(
            f"higher-priority utilization {hp} >= 1: no finite response time exists"
        )
    total = hp + Fraction(ts.tasks[-1].c, ts.tasks[-1].p)
    return UtilizationReport(hp, total, total <= 1)


def is_harmonic(obj: TaskSystem | Iterable[int]) -> bool:
    """True iff the periods (or given capacities) pairwise divide in sorted order."""
    values = sorted(obj.periods() if isinstance(obj, TaskSystem) else obj)
    if not values:
        return True
    if values[0] < 1:
        raise InvalidInstance("harmonicity is defined for positive integers only")
    return all(b % a == 0 for a, b in zip(values, values[1:]))


@dataclass(frozen=True)
class BoundsResult:
    """Certified interval for the lowest-priority response time.

    ell <= r <= min(u1, u2); `u` is the integer search ceiling
    min(ceil(u1), u2) used by the binary searches (the response time is
    integral, the analytic u1 generally is not).
    """

    ell: Fraction
    u1: Fraction
    u2: int
    u: int


def bounds_from_parts(
    gamma: int,
    interferers: Sequence[Task],
    cap: int | None = None,
) -> BoundsResult:
    """Bounds for the least t with t >= gamma + sum c_i*ceil((t+jitter_i)/p_i)."""
    util = sum((Fraction(t.c, t.p) for t in interferers), Fraction(0))
    if util >= 1:
        raise UtilizationExceeded(f"interfering utilization {util} >= 1")
    slack = 1 - util
    cost_sum = sum(t.c for t in interferers)
    ell = (gamma + sum((Fraction(t.jitter, t.p) * t.c for t in interferers), Fraction(0))) / slack
    u1 = ell + Fraction(cost_sum) / slack
    m = lcm_capped((t.p for t in interferers), cap)
    u2 = ceil_frac(Fraction(gamma + cost_sum) / (slack * m)) * m
    return BoundsResult(ell, u1, u2, min(ceil_frac(u1), u2))


def response_bounds(ts: TaskSystem, cap: int | None = None) -> BoundsResult:
    """Bounds on the response time of the lowest-priority task."""
    validate(ts)
    check_general_utilization_bound(ts)
    return bounds_from_parts(ts.tasks[-1].c, ts.tasks[:-1], cap)


def jitter_free_bounds(ts: TaskSystem, cap: int | None = None) -> tuple[Fraction, int]:
    """(lower, P) with c_n/(1-U) <= r_n <= P = lcm of all periods; requires jitter 0."""
    validate(ts)
    if any(t.jitter != 0 for t in ts.tasks):
        raise PreconditionViolated("jitter-free bounds require jitter = 0 for every task")
    check_general_utilization_bound(ts)
    slack = 1 - utilization(ts, exclude_last=True)
    lower = Fraction(ts.tasks[-1].c) / slack
    period = lcm_capped(ts.periods(), cap)
    return lower, period


@dataclass(frozen=True)
class WidthCertificate:
    name: str
    lhs: Fraction
    rhs: int
    holds: bool


def interval_width_certificates(ts: TaskSystem, cap: int | None = None) -> tuple[WidthCertificate, ...]:
    """Certify the pseudo-polynomial width of the bound interval.

    u1 - ell <= p_max**n always; under the schedulability bound
    (total utilization <= 1) additionally u1 - ell <= p_max**2 and
    u1 <= 2*p_max**2.  A failed certificate is an arithmetic bug.
    """
    b = response_bounds(ts, cap)
    p_max = max(ts.periods())
    n = len(ts.tasks)
    checks = [WidthCertificate("width_le_pmax_pow_n", b.u1 - b.ell, p_max**n, b.u1 - b.ell <= p_max**n)]
    if utilization(ts) <= 1:
        checks.append(
            WidthCertificate("width_le_pmax_sq", b.u1 - b.ell, p_max**2, b.u1 - b.ell <= p_max**2)
        )
        checks.append(WidthCertificate("u1_le_two_pmax_sq", b.u1, 2 * p_max**2, b.u1 <= 2 * p_max**2))
    for c in checks:
        if not c.holds:
            raise InternalInvariantViolated(f"certified inequality {c.name} failed: {c.lhs} > {c.rhs}")
    return tuple(checks)
