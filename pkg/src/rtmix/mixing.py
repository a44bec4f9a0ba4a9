"""The mixing set program: min w0*s + sum w_i*x_i  s.t.  s + a_i*x_i >= b_i.

Here s ranges over nonnegative integers and x over all integers; capacities
a_i are positive, weights nonnegative, right-hand sides arbitrary (negative
b_i arise from the shift normalization in `reverse`).  For a fixed s the
pointwise-minimal completion x_i(s) = ceil((b_i - s)/a_i) is optimal, so the
whole problem is a one-dimensional search over s.

Three exact solvers are provided:

* `solve_bruteforce` scans every s up to a certified bound - the correctness
  oracle for everything else.
* `solve_breakpoints` evaluates only the objective's breakpoints
  (s congruent to b_i mod a_i, plus 0 and lcm-1); exact for arbitrary
  capacities, used as a second cross-check.
* `solve_harmonic` exploits a divisibility chain among the capacities: the
  objective shifts by a*(w0 - sum_{a_j <= a} w_j/a_j) >= 0 under s -> s + a,
  so the search narrows to one capacity-period per level and only splits at
  the level's own breakpoints.

Every solver returns the solution with the smallest optimal s, and every
returned solution is feasibility-checked before it leaves the module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from . import counters
from .core import ceil_div, ceil_frac, is_harmonic, lcm_capped
from .errors import (
    InternalInvariantViolated,
    InvalidInstance,
    OverflowLimit,
    PreconditionViolated,
    Unbounded,
)


@dataclass(frozen=True)
class MixTerm:
    w: int  # objective weight of x_i
    a: int  # capacity
    b: int  # right-hand side


@dataclass(frozen=True)
class MixInstance:
    w0: int
    terms: tuple[MixTerm, ...]

    def __init__(self, w0: int, terms: Iterable[MixTerm | tuple]):
        object.__setattr__(self, "w0", w0)
        object.__setattr__(
            self,
            "terms",
            tuple(t if isinstance(t, MixTerm) else MixTerm(*t) for t in terms),
        )

    def capacities(self) -> tuple[int, ...]:
        return tuple(t.a for t in self.terms)


@dataclass(frozen=True)
class MixSolution:
    s: int
    x: tuple[int, ...]
    objective: int


def validate(inst: MixInstance) -> None:
    if not isinstance(inst.w0, int) or inst.w0 < 0:
        raise InvalidInstance(f"w0 must be a nonnegative integer, got {inst.w0}")
    for idx, t in enumerate(inst.terms):
        if not all(isinstance(v, int) for v in (t.w, t.a, t.b)):
            raise InvalidInstance(f"term {idx}: w, a, b must be integers")
        if t.a < 1:
            raise InvalidInstance(f"term {idx}: capacity must satisfy a >= 1, got {t.a}")
        if t.w < 0:
            raise InvalidInstance(f"term {idx}: weight must be nonnegative, got {t.w}")


def complete(s: int, inst: MixInstance) -> MixSolution:
    """Canonical completion of s: x_i = ceil((b_i - s)/a_i), pointwise minimal."""
    if s < 0:
        raise PreconditionViolated(f"s must be nonnegative, got {s}")
    x = tuple(ceil_div(t.b - s, t.a) for t in inst.terms)
    obj = inst.w0 * s + sum(t.w * xi for t, xi in zip(inst.terms, x))
    return MixSolution(s, x, obj)


def objective_at(s: int, inst: MixInstance) -> int:
    return inst.w0 * s + sum(t.w * ceil_div(t.b - s, t.a) for t in inst.terms)


def weight_utilization(inst: MixInstance) -> Fraction:
    return sum((Fraction(t.w, t.a) for t in inst.terms), Fraction(0))


def is_unbounded(inst: MixInstance) -> bool:
    """Unbounded iff sum w_i/a_i > w0: pushing s up one lcm then pays for itself."""
    validate(inst)
    return weight_utilization(inst) > inst.w0


def s_search_bound(inst: MixInstance, cap: int | None = None) -> int:
    """An integer S with some optimal s <= S.

    Always lcm(a) - 1; when sum w_i/a_i < w0 strictly (and w0 >= 1) this is
    intersected with ceil(sum w_i / (w0 - sum w_i/a_i)), below which shifting
    s down by that amount strictly improves the objective.
    """
    validate(inst)
    bound = lcm_capped(inst.capacities(), cap) - 1
    util = weight_utilization(inst)
    if inst.w0 >= 1 and util < inst.w0:
        weight_sum = sum(t.w for t in inst.terms)
        bound = min(bound, ceil_frac(Fraction(weight_sum) / (inst.w0 - util)))
    return bound


def certified_s_bound(inst: MixInstance, cap: int | None = None) -> int:
    """Like `s_search_bound`, but survives an over-cap lcm when the
    strict-utilization bound alone certifies a value."""
    validate(inst)
    util = weight_utilization(inst)
    util_bound = None
    if inst.w0 >= 1 and util < inst.w0:
        weight_sum = sum(t.w for t in inst.terms)
        util_bound = ceil_frac(Fraction(weight_sum) / (inst.w0 - util))
    try:
        lcm_bound = lcm_capped(inst.capacities(), cap) - 1
    except OverflowLimit:
        if util_bound is None:
            raise
        return util_bound
    return lcm_bound if util_bound is None else min(lcm_bound, util_bound)


def _finalize(s: int, inst: MixInstance) -> MixSolution:
    sol = complete(s, inst)
    for t, xi in zip(inst.terms, sol.x):
        if sol.s + t.a * xi < t.b:
            raise InternalInvariantViolated(
                f"solver produced an infeasible completion at s={sol.s}"
            )
    return sol


def solve_bruteforce(
    inst: MixInstance, *, s_bound: int | None = None, cap: int | None = None
) -> MixSolution:
    """Global optimum by scanning s = 0 .. bound; smallest optimal s wins ties."""
    validate(inst)
    if is_unbounded(inst):
        raise Unbounded("sum w_i/a_i exceeds w0")
    hi = s_search_bound(inst, cap) if s_bound is None else s_bound
    counters.bump("mixing_calls")
    best_s, best_obj = 0, objective_at(0, inst)
    for s in range(1, hi + 1):
        obj = objective_at(s, inst)
        if obj < best_obj:
            best_s, best_obj = s, obj
    counters.bump("mixing_ops", (hi + 1) * (len(inst.terms) + 1))
    return _finalize(best_s, inst)


def solve_breakpoints(inst: MixInstance, cap: int | None = None) -> MixSolution:
    """Exact fallback testing only candidate s values where some ceiling drops.

    Between breakpoints the objective is linear with slope w0 >= 0, so every
    local minimum sits at a breakpoint or at s = 0; lcm - 1 is included
    defensively.  Works for arbitrary capacities.
    """
    validate(inst)
    if is_unbounded(inst):
        raise Unbounded("sum w_i/a_i exceeds w0")
    m = lcm_capped(inst.capacities(), cap)
    candidates = {0, m - 1}
    for t in inst.terms:
        candidates.update(range(t.b % t.a, m, t.a))
    counters.bump("mixing_calls")
    counters.bump("mixing_ops", len(candidates) * (len(inst.terms) + 1))
    best_s, best_obj = None, None
    for s in sorted(candidates):
        obj = objective_at(s, inst)
        if best_obj is None or obj < best_obj:
            best_s, best_obj = s, obj
    return _finalize(best_s, inst)


def solve_harmonic(inst: MixInstance, cap: int | None = None) -> MixSolution:
    """Global optimum for a divisibility chain of capacities.

    Works top-down over distinct capacities a (largest first) on windows
    [L, R).  Invariants: every term with capacity above the current level is
    constant on the window, and the boundedness check guarantees
    w0 >= sum_{a_j <= a} w_j/a_j, so s -> s + a never improves the objective
    and the window narrows to [L, L + a).  Splitting at the level's own
    breakpoints restores the invariant one level down; at the bottom the
    objective is linear with slope w0 >= 0 and the left endpoint wins.
    Leaves are explored left to right, so ties resolve to the smallest s.
    """
    validate(inst)
    if not is_harmonic(inst.capacities()):
        raise PreconditionViolated("capacities do not form a divisibility chain")
    if is_unbounded(inst):
        raise Unbounded("sum w_i/a_i exceeds w0")
    counters.bump("mixing_calls")
    if not inst.terms:
        return _finalize(0, inst)

    residues: dict[int, set[int]] = {}
    for t in inst.terms:
        residues.setdefault(t.a, set()).add(t.b % t.a)
    levels = sorted(residues)  # ascending capacities
    m = levels[-1]             # lcm of a harmonic chain is its maximum

    best_s: int | None = None
    best_obj: int | None = None
    stack: list[tuple[int, int, int]] = [(0, m, len(levels) - 1)]
    while stack:
        left, right, li = stack.pop()
        if left >= right:
            continue
        if li < 0:
            counters.bump("mixing_ops", len(inst.terms) + 1)
            obj = objective_at(left, inst)
            if best_obj is None or obj < best_obj:
                best_s, best_obj = left, obj
            continue
        a = levels[li]
        right = min(right, left + a)
        cuts = sorted(
            d
            for d in {left + ((r - left) % a) for r in residues[a]}
            if left < d < right
        )
        counters.bump("mixing_ops", len(residues[a]) + 1)
        lo = left
        segments = []
        for d in cuts:
            segments.append((lo, d))
            lo = d
        segments.append((lo, right))
        for seg_left, seg_right in reversed(segments):
            stack.append((seg_left, seg_right, li - 1))
    return _finalize(best_s, inst)


@dataclass(frozen=True)
class ShiftCheck:
    s: int
    period: int
    checked_forward: bool
    checked_backward: bool


def shift_identity_check(inst: MixInstance, s: int, cap: int | None = None) -> ShiftCheck:
    """Verify x_i(s +- m) = x_i(s) -+ m/a_i for m = lcm of the capacities.

    The backward direction is skipped when s - m < 0.  Used by the property
    suite; a failure means the ceiling arithmetic itself is broken.
    """
    validate(inst)
    m = lcm_capped(inst.capacities(), cap)
    base = complete(s, inst).x
    fwd = complete(s + m, inst).x
    for t, xb, xf in zip(inst.terms, base, fwd):
        if xf != xb - m // t.a:
            raise InternalInvariantViolated(
                f"forward shift identity failed for capacity {t.a} at s={s}"
            )
    backward = s - m >= 0
    if backward:
        bwd = complete(s - m, inst).x
        for t, xb, xw in zip(inst.terms, base, bwd):
            if xw != xb + m // t.a:
                raise InternalInvariantViolated(
                    f"backward shift identity failed for capacity {t.a} at s={s}"
                )
    return ShiftCheck(s, m, True, backward)
