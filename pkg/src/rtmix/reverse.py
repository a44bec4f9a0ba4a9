"""Solving mixing set instances through response-time computations.

The forward reduction decides "response(I, gamma) <= k" via
"Mix(I, k) <= k - gamma"; substituting k -> k' + gamma, gamma -> beta - k'
turns it around: for beta at or above the certified bound S on optimal s,

    Mix(I, beta) <= k   iff   response(I, beta - k) <= beta,

where the instance's capacities become periods, weights become costs, and
b_i - beta becomes the release jitter.  This module applies that identity:

* `solve_crowded` handles right-hand sides with lcm(a) <= b_i <= b_min + a_i,
  where the jitter encoding is immediate;
* `solve_general_via_shift` normalizes an arbitrary right-hand side into the
  crowded window by shifting each b_i up by a multiple of a_i (the objective
  shifts by a computable constant);
* `solve_constant_beta` is the all-equal right-hand-side special case, where
  the inner queries are jitter-free.

All of these fix w0 = 1 (rescaling would change the integrality of the dual
query) and reject anything else.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import mixing, rta
from .core import Task, TaskSystem, ceil_div, is_harmonic, lcm_capped
from .errors import InternalInvariantViolated, PreconditionViolated, Unbounded


@dataclass(frozen=True)
class ShiftRecord:
    """Normalization data: b'_i = b_i + offset_i * a_i lands in [m, m + a_i]."""

    m: int
    offsets: tuple[int, ...]
    objective_correction: int


def _require_unit_s_weight(inst: mixing.MixInstance) -> None:
    if inst.w0 != 1:
        raise PreconditionViolated(
            f"reverse reductions require w0 = 1, got {inst.w0} (rescaling would "
            "change the integrality of the dual query)"
        )


def _pseudo_system(inst: mixing.MixInstance, beta: int) -> tuple[TaskSystem, tuple[int, ...]]:
    """Tasks (c=w_i, p=a_i, jitter=b_i - beta) for the positive-weight terms.

    Zero-weight terms never contribute to the objective and their constraints
    are met by the canonical completion, so they are dropped from the query.
    """
    kept = []
    for idx, t in enumerate(inst.terms):
        jit = t.b - beta
        if not 0 <= jit <= t.a:
            raise PreconditionViolated(
                f"term {idx}: jitter encoding needs 0 <= b - beta <= a, got {jit}"
            )
        if t.w > 0:
            kept.append(Task(t.w, t.a, jit))
    return TaskSystem(kept) if kept else TaskSystem([Task(1, 1, 0)]), tuple(range(len(kept)))


def _workload(tasks, gamma: int, t: int) -> int:
    return gamma + sum(task.c * ceil_div(t + task.jitter, task.p) for task in tasks)


def _response_leq(
    inst: mixing.MixInstance, beta: int, gamma: int, cap: int | None
) -> tuple[bool, int | None]:
    """Decide whether the dual response at `gamma` is <= beta, returning the
    response value when finite.

    At weight utilization exactly 1 the response may not exist; then
    t -> t + m changes workload by exactly m, so each residue class modulo
    m = lcm(a) is feasible iff its smallest member is, and a residue scan
    settles the decision.
    """
    system, indices = _pseudo_system(inst, beta)
    tasks = [system.tasks[i] for i in indices]
    util = sum(Fraction(t.c, t.p) for t in tasks)
    if util < 1:
        q = rta.ResponseQuery(system, indices, gamma)
        if is_harmonic([t.p for t in tasks]):
            r = rta.response_harmonic(q, cap=cap)
        elif all(t.jitter == 0 for t in tasks):
            r = rta.response_jitter_free(q, cap=cap)
        else:
            r = rta.response_turing(q, cap=cap)
        return r <= beta, r
    m = lcm_capped((t.p for t in tasks), cap)
    for rho in range(m):
        if _workload(tasks, gamma, rho) <= rho:
            return rho <= beta, rho
    return False, None


def mix_leq_via_rtc(
    inst: mixing.MixInstance, beta: int, k: int, cap: int | None = None
) -> bool:
    """Decide Mix(I, beta) <= k by computing response(I, beta - k) and
    comparing with beta.  Requires the jitter encoding 0 <= b_i - beta <= a_i,
    beta at or above the certified s bound, and beta - k >= 1."""
    _require_unit_s_weight(inst)
    mixing.validate(inst)
    if beta - k < 1:
        raise PreconditionViolated(f"need beta - k >= 1, got beta={beta}, k={k}")
    if beta < mixing.certified_s_bound(inst, cap):
        raise PreconditionViolated(
            f"beta={beta} is below the certified bound on optimal s"
        )
    verdict, _ = _response_leq(inst, beta, beta - k, cap)
    return verdict


def _witness(inst: mixing.MixInstance, s: int, expect: int) -> mixing.MixSolution:
    sol = mixing.complete(s, inst)
    if sol.objective != expect:
        raise InternalInvariantViolated(
            f"witness at s={s} has objective {sol.objective}, expected {expect}"
        )
    return sol


def solve_crowded(inst: mixing.MixInstance, cap: int | None = None) -> mixing.MixSolution:
    """Optimum for crowded right-hand sides: lcm(a) <= b_i <= b_min + a_i.

    Sets beta = b_min, jitter_i = b_i - beta, then binary-searches the least
    k with response(I, beta - k) <= beta.  Probes are limited to k <= beta - 1
    (the dual constant must stay >= 1); when even beta - 1 fails, the optimum
    lies in [beta, b_max] and is recovered from the maximum of the dual
    objective t - sum w_i*ceil((t + jitter_i)/a_i) over one capacity period,
    which the shift identity pins to (beta - m, beta].
    """
    _require_unit_s_weight(inst)
    mixing.validate(inst)
    if mixing.is_unbounded(inst):
        raise Unbounded("weight utilization exceeds 1")
    if not inst.terms:
        return mixing.complete(0, inst)
    m = lcm_capped(inst.capacities(), cap)
    b_min = min(t.b for t in inst.terms)
    b_max = max(t.b for t in inst.terms)
    for idx, t in enumerate(inst.terms):
        if not m <= t.b <= b_min + t.a:
            raise PreconditionViolated(
                f"term {idx}: crowded right-hand side needs lcm <= b <= b_min + a"
            )
    beta = b_min
    if mix_leq_via_rtc(inst, beta, beta - 1, cap):
        lo, hi = 0, beta - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if mix_leq_via_rtc(inst, beta, mid, cap):
                hi = mid
            else:
                lo = mid + 1
        opt = lo
        _, r = _response_leq(inst, beta, beta - opt, cap)
        return _witness(inst, beta - r, opt)
    # optimum in [beta, b_max]: maximize the dual objective directly
    system, indices = _pseudo_system(inst, beta)
    tasks = [system.tasks[i] for i in indices]
    best_t, best_val = None, None
    for t in range(max(0, beta - m) + 1, beta + 1):
        val = t - _workload(tasks, 0, t)
        if best_val is None or val > best_val:
            best_t, best_val = t, val
    opt = beta - best_val
    if not beta <= opt <= b_max:
        raise InternalInvariantViolated(f"crowded fallback produced optimum {opt} outside [beta, b_max]")
    return _witness(inst, beta - best_t, opt)


def solve_general_via_shift(inst: mixing.MixInstance, cap: int | None = None) -> mixing.MixSolution:
    """Arbitrary right-hand sides: shift each b_i up to the crowded window
    [m, m + a_i], solve the crowded instance, and subtract the shift cost."""
    _require_unit_s_weight(inst)
    mixing.validate(inst)
    if mixing.is_unbounded(inst):
        raise PreconditionViolated("instance is unbounded")
    if not inst.terms:
        return mixing.complete(0, inst)
    rec = shift_record(inst, cap)
    shifted = mixing.MixInstance(
        1,
        [
            (t.w, t.a, t.b + off * t.a)
            for t, off in zip(inst.terms, rec.offsets)
        ],
    )
    crowded = solve_crowded(shifted, cap)
    return _witness(inst, crowded.s, crowded.objective - rec.objective_correction)


def shift_record(inst: mixing.MixInstance, cap: int | None = None) -> ShiftRecord:
    """Offsets ceil((m - b_i)/a_i) and the objective correction they cost."""
    m = lcm_capped(inst.capacities(), cap)
    offsets = tuple(ceil_div(m - t.b, t.a) for t in inst.terms)
    for t, off in zip(inst.terms, offsets):
        shifted = t.b + off * t.a
        if not m <= shifted <= m + t.a:
            raise InternalInvariantViolated(
                f"shifted right-hand side {shifted} escaped [m, m + a]"
            )
    correction = sum(t.w * off for t, off in zip(inst.terms, offsets))
    return ShiftRecord(m, offsets, correction)


def solve_constant_beta(
    inst: mixing.MixInstance, beta: int, cap: int | None = None
) -> mixing.MixSolution:
    """All right-hand sides equal to beta; inner queries are jitter-free.

    Requires beta >= a_max for harmonic capacities, beta >= lcm(a) otherwise.
    (s = beta, x = 0) is always feasible with value beta, so the optimum is
    the least k in [0, beta] with response(I, beta - k) <= beta.
    """
    _require_unit_s_weight(inst)
    mixing.validate(inst)
    if mixing.is_unbounded(inst):
        raise Unbounded("weight utilization exceeds 1")
    if not inst.terms:
        return mixing.complete(0, inst)
    if any(t.b != beta for t in inst.terms):
        raise PreconditionViolated("constant-beta path requires every b_i == beta")
    caps = inst.capacities()
    if is_harmonic(caps):
        if beta < max(caps):
            raise PreconditionViolated(f"harmonic path needs beta >= a_max, got {beta}")
    elif beta < lcm_capped(caps, cap):
        raise PreconditionViolated(f"general path needs beta >= lcm(a), got {beta}")
    lo, hi = 0, beta
    while lo < hi:
        mid = (lo + hi) // 2  # mid <= beta - 1, so the dual constant stays >= 1
        if mix_leq_via_rtc(inst, beta, mid, cap):
            hi = mid
        else:
            lo = mid + 1
    opt = lo
    if opt == beta:
        return _witness(inst, beta, opt)
    _, r = _response_leq(inst, beta, beta - opt, cap)
    return _witness(inst, beta - r, opt)
