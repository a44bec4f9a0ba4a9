"""Response-time computation by dualized reduction to mixing set programs.

The generalized query is: given interfering tasks I and a constant gamma >= 1,
find the least t >= 0 with

    t >= gamma + sum_{i in I} c_i * ceil((t + jitter_i) / p_i).

`response_bruteforce` solves it by the classic monotone fixed-point iteration
and is the oracle for everything else.  The other algorithms answer the
decision "response <= k?" through the equivalent mixing set question
"Mix(I, k) <= k - gamma?", where Mix(I, k) has one term (w=c_i, a=p_i,
b=k+jitter_i) per interferer.  That equivalence is only valid once k reaches
a certified bound S on the optimal s of the mixing instance, hence:

* `response_turing` (any periods): decide at k = S; on yes, scan [gamma, S]
  directly, on no, binary-search (S, u] where every probe is valid.
* `narrow` / `catch` (harmonic periods): walk the sorted distinct differences
  p_j - jitter_j.  For every task whose period is at least the probe, the
  optimal multiplier is forced to 1 or 2 by the probe's position relative to
  p_j - jitter_j, so those tasks leave the residual instance and the probe
  stays above every residual period.  `narrow` finds the bracketing interval,
  `catch` binary-searches inside it.
* `response_lcm_scan` (any periods): the workload decomposes over residues
  modulo lcm of the periods; each residue yields at most one fixed point.
* `response_jitter_free`: with zero jitter (s=k, x=0) is always feasible for
  the mixing instance, so every k is decidable and a plain binary search works.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from . import counters, mixing
from .core import (
    BoundsResult,
    TaskSystem,
    bounds_from_parts,
    ceil_div,
    ceil_frac,
    is_harmonic,
    lcm_capped,
    validate,
)
from .errors import (
    InternalInvariantViolated,
    InvalidInstance,
    PreconditionKTooSmall,
    PreconditionViolated,
    UtilizationExceeded,
)

Algorithm = Literal["auto", "bruteforce", "harmonic", "lcm-scan", "turing", "jitter-free"]

ALGORITHMS = ("auto", "bruteforce", "harmonic", "lcm-scan", "turing", "jitter-free")


@dataclass(frozen=True)
class ResponseQuery:
    """Interference set I (indices into the system) plus the constant gamma."""

    system: TaskSystem
    indices: tuple[int, ...]
    gamma: int

    def __init__(self, system: TaskSystem, indices: Sequence[int], gamma: int):
        object.__setattr__(self, "system", system)
        object.__setattr__(self, "indices", tuple(sorted(set(indices))))
        object.__setattr__(self, "gamma", gamma)
        if not isinstance(gamma, int) or gamma < 1:
            raise InvalidInstance(f"gamma must be an integer >= 1, got {gamma}")
        n = len(system.tasks)
        if any(not 0 <= i < n for i in self.indices):
            raise InvalidInstance("interference indices out of range")
        util = sum(
            (Fraction(system.tasks[i].c, system.tasks[i].p) for i in self.indices),
            Fraction(0),
        )
        if util >= 1:
            raise UtilizationExceeded(f"interfering utilization {util} >= 1")

    def interferers(self):
        return tuple(self.system.tasks[i] for i in self.indices)


@dataclass(frozen=True)
class DecisionOutcome:
    verdict: bool
    k: int
    certificate: mixing.MixSolution | None


@dataclass
class ProbeRecord:
    """Instrumentation record of one decision probe (for invariant audits)."""

    phase: str                  # "narrow" or "catch"
    k: int
    forced: dict[int, int]      # task index -> forced multiplier (1 or 2)
    residual: tuple[int, ...]
    gamma_prime: int
    feasible: bool


def _phi(interferers, gamma: int, t: int) -> int:
    return gamma + sum(task.c * ceil_div(t + task.jitter, task.p) for task in interferers)


def _query_bounds(q: ResponseQuery, cap: int | None = None) -> BoundsResult:
    return bounds_from_parts(q.gamma, q.interferers(), cap)


def response_bruteforce(q: ResponseQuery, cap: int | None = None) -> int:
    """Least fixed point of t -> gamma + sum c_i*ceil((t+jitter_i)/p_i),
    iterated upward from gamma.  Monotone, so it converges to the least
    feasible t; the certified upper bound doubles as an iteration guard."""
    if not q.indices:
        return q.gamma
    bounds = _query_bounds(q, cap)
    tasks = q.interferers()
    t = q.gamma
    while True:
        counters.bump("fixpoint_iters")
        nxt = _phi(tasks, q.gamma, t)
        if nxt == t:
            break
        if nxt > bounds.u:
            raise InternalInvariantViolated(
                f"fixed-point iteration escaped the certified bound {bounds.u}"
            )
        t = nxt
    return t


def build_mix_for_k(q: ResponseQuery, k: int) -> mixing.MixInstance:
    """Mixing instance deciding response <= k: term (w=c_i, a=p_i, b=k+jitter_i)."""
    if k < 1:
        raise PreconditionViolated(f"decision probes need k >= 1, got {k}")
    return mixing.MixInstance(
        1, [(t.c, t.p, k + t.jitter) for t in q.interferers()]
    )


def _certified_query_bound(q: ResponseQuery, cap: int | None = None) -> int:
    """Certified bound S on the optimal s of any Mix(I, k) built from q.

    Independent of k: min of lcm(p_i) - 1 (when within cap) and the
    strict-utilization bound ceil(sum c_i / (1 - U)), which always exists
    because valid queries have U < 1."""
    probe = mixing.MixInstance(1, [(t.c, t.p, 0) for t in q.interferers()])
    return mixing.certified_s_bound(probe, cap)


def _solve_mix(
    inst: mixing.MixInstance, s_bound: int | None = None, cap: int | None = None
) -> mixing.MixSolution:
    if is_harmonic(inst.capacities()):
        return mixing.solve_harmonic(inst, cap)
    return mixing.solve_bruteforce(inst, s_bound=s_bound, cap=cap)


def decide_large_k(
    q: ResponseQuery,
    k: int,
    *,
    skip_gate: bool = False,
    cap: int | None = None,
) -> DecisionOutcome:
    """Decide response(I, gamma) <= k through Mix(I, k) <= k - gamma.

    Valid only for k at or above the certified bound S (the gate); callers
    that certify validity some other way (jitter-free reductions, the
    harmonic walk) pass skip_gate=True.
    """
    if not q.indices:
        if k < 1:
            raise PreconditionViolated(f"decision probes need k >= 1, got {k}")
        return DecisionOutcome(k >= q.gamma, k, mixing.MixSolution(0, (), 0))
    gate = None
    if not skip_gate:
        gate = _certified_query_bound(q, cap)
        if k < gate:
            raise PreconditionKTooSmall(k, gate)
    counters.bump("decision_probes")
    inst = build_mix_for_k(q, k)
    s_bound = gate if gate is not None else _certified_query_bound(q, cap)
    sol = _solve_mix(inst, s_bound=s_bound, cap=cap)
    return DecisionOutcome(sol.objective <= k - q.gamma, k, sol)


def two_values(q: ResponseQuery, i: int, t: int) -> int:
    """Forced multiplier of task i at an optimum t with 0 < t <= p_i:
    1 while t <= p_i - jitter_i, else 2."""
    task = q.system.tasks[i]
    if not 0 < t <= task.p:
        raise PreconditionViolated(f"t={t} outside (0, p_{i}={task.p}]")
    return 1 if t <= task.p - task.jitter else 2


def _decide_residual(
    q: ResponseQuery,
    residual: tuple[int, ...],
    gamma_prime: int,
    k: int,
    cap: int | None,
) -> tuple[bool, mixing.MixSolution | None]:
    """Probe Mix(residual, k) <= k - gamma_prime; residual periods < k by
    construction, so the reduction gate holds."""
    if any(q.system.tasks[j].p >= k for j in residual):
        raise InternalInvariantViolated("residual set contains a period >= probe")
    sub = ResponseQuery(q.system, residual, gamma_prime)
    out = decide_large_k(sub, k, skip_gate=True, cap=cap)
    return out.verdict, out.certificate


def narrow(
    q: ResponseQuery,
    *,
    trace: list[ProbeRecord] | None = None,
    cap: int | None = None,
) -> int:
    """Bracket the response among the sorted distinct differences p_j - jitter_j,
    then hand the interval to `catch`.

    At probe k_i every task with p_j >= k_i has a forced multiplier: 1 when
    k_i <= p_j - jitter_j (the optimum cannot exceed that difference), 2 when
    the difference was already probed infeasible (or is zero).  Those tasks
    move into the constant part gamma_i; the rest form a residual instance
    whose periods all lie below k_i.
    """
    if not q.indices:
        return q.gamma
    tasks = q.system.tasks
    if not is_harmonic([tasks[j].p for j in q.indices]):
        raise PreconditionViolated("harmonic walk requires harmonic periods over I")
    bounds = _query_bounds(q, cap)
    diffs = sorted({tasks[j].p - tasks[j].jitter for j in q.indices} - {0})
    prev = 0
    for k in diffs:
        ones = [j for j in q.indices if k <= tasks[j].p - tasks[j].jitter]
        twos = [j for j in q.indices if tasks[j].p - tasks[j].jitter < k <= tasks[j].p]
        residual = tuple(j for j in q.indices if tasks[j].p < k)
        gamma_i = q.gamma + sum(tasks[j].c for j in ones) + 2 * sum(tasks[j].c for j in twos)
        feasible, _ = _decide_residual(q, residual, gamma_i, k, cap)
        if trace is not None:
            forced = {j: 1 for j in ones} | {j: 2 for j in twos}
            trace.append(ProbeRecord("narrow", k, forced, residual, gamma_i, feasible))
        if feasible:
            return catch(q, prev + 1, k, trace=trace, cap=cap)
        prev = k
    return catch(q, prev + 1, bounds.u, trace=trace, cap=cap)


def catch(
    q: ResponseQuery,
    left: int,
    right: int,
    *,
    trace: list[ProbeRecord] | None = None,
    cap: int | None = None,
) -> int:
    """Binary search for the least feasible t in [left, right].

    Precondition (guaranteed by `narrow`): the response lies in the interval
    and no difference p_j - jitter_j does, so multipliers of all tasks with
    p_j >= probe stay forced throughout the search.
    """
    if left > right:
        raise PreconditionViolated(f"empty search interval [{left}, {right}]")
    tasks = q.system.tasks
    ones = [j for j in q.indices if right <= tasks[j].p - tasks[j].jitter]
    while left != right:
        kappa = (left + right) // 2
        twos = [j for j in q.indices if kappa <= tasks[j].p < left + tasks[j].jitter]
        gamma_k = q.gamma + sum(tasks[j].c for j in ones) + 2 * sum(tasks[j].c for j in twos)
        residual = tuple(j for j in q.indices if j not in ones and j not in twos)
        feasible, _ = _decide_residual(q, residual, gamma_k, kappa, cap)
        if trace is not None:
            forced = {j: 1 for j in ones} | {j: 2 for j in twos}
            trace.append(ProbeRecord("catch", kappa, forced, residual, gamma_k, feasible))
        if feasible:
            right = kappa
        else:
            left = kappa + 1
    interferers = q.interferers()
    if _phi(interferers, q.gamma, right) > right:
        raise InternalInvariantViolated(f"catch returned infeasible t={right}")
    return right


def response_harmonic(
    q: ResponseQuery,
    *,
    trace: list[ProbeRecord] | None = None,
    cap: int | None = None,
) -> int:
    """narrow + catch, with a final minimality re-check against the recurrence."""
    r = narrow(q, trace=trace, cap=cap)
    interferers = q.interferers()
    if _phi(interferers, q.gamma, r) > r:
        raise InternalInvariantViolated(f"harmonic walk returned infeasible t={r}")
    if r > q.gamma and _phi(interferers, q.gamma, r - 1) <= r - 1:
        raise InternalInvariantViolated(f"harmonic walk returned non-minimal t={r}")
    return r


def response_lcm_scan(q: ResponseQuery, cap: int | None = None) -> int:
    """Scan residues modulo m = lcm of the interfering periods.

    Writing t = rho + lambda*m, the workload satisfies
    w(t) = w(rho) + lambda*m*U, so each residue admits at most one fixed
    point, at lambda = (w(rho) - rho) / ((1-U)*m); collect the residues where
    lambda is a nonnegative integer and return the smallest fixed point.
    """
    if not q.indices:
        return q.gamma
    tasks = q.interferers()
    m = lcm_capped((t.p for t in tasks), cap)
    util = sum(Fraction(t.c, t.p) for t in tasks)
    denom = (1 - util) * m
    best = None
    for rho in range(m):
        lam = Fraction(_phi(tasks, q.gamma, rho) - rho) / denom
        if lam.denominator == 1 and lam >= 0:
            candidate = rho + int(lam) * m
            if best is None or candidate < best:
                best = candidate
    if best is None:
        raise InternalInvariantViolated("residue scan found no fixed point under U < 1")
    return best


def response_turing(q: ResponseQuery, cap: int | None = None) -> int:
    """Decide at the certified bound S, then scan below or binary-search above."""
    if not q.indices:
        return q.gamma
    bounds = _query_bounds(q, cap)
    s_cert = _certified_query_bound(q, cap)
    tasks = q.interferers()
    if s_cert >= 1 and decide_large_k(q, s_cert, cap=cap).verdict:
        for t in range(q.gamma, s_cert + 1):
            if _phi(tasks, q.gamma, t) <= t:
                return t
        raise InternalInvariantViolated("decision at S affirmed but the scan found nothing")
    lo = max(s_cert + 1, ceil_frac(bounds.ell))
    hi = bounds.u
    while lo < hi:
        mid = (lo + hi) // 2
        if decide_large_k(q, mid, skip_gate=True, cap=cap).verdict:
            hi = mid
        else:
            lo = mid + 1
    if _phi(tasks, q.gamma, lo) > lo:
        raise InternalInvariantViolated(f"binary search returned infeasible t={lo}")
    if lo > q.gamma and _phi(tasks, q.gamma, lo - 1) <= lo - 1:
        raise InternalInvariantViolated(f"binary search returned non-minimal t={lo}")
    return lo


def response_jitter_free(q: ResponseQuery, cap: int | None = None) -> int:
    """Unconditional binary search for zero-jitter queries.

    With jitter 0 the pair (s=k, x=0) is feasible for Mix(I, k) and anything
    with s > k is strictly worse, so the bound S <= k holds for every probe.
    """
    tasks = q.interferers()
    if any(t.jitter != 0 for t in tasks):
        raise PreconditionViolated("jitter-free search requires jitter = 0 over I")
    if not q.indices:
        return q.gamma
    bounds = _query_bounds(q, cap)
    lo = max(q.gamma, ceil_frac(bounds.ell))
    hi = bounds.u
    m = lcm_capped((t.p for t in tasks), cap)
    if _phi(tasks, q.gamma, m) <= m:
        hi = min(hi, m)
    s_cert = _certified_query_bound(q, cap)
    while lo < hi:
        kappa = (lo + hi) // 2
        counters.bump("decision_probes")
        inst = build_mix_for_k(q, kappa)
        sol = _solve_mix(inst, s_bound=min(s_cert, kappa), cap=cap)
        if sol.objective <= kappa - q.gamma:
            hi = kappa
        else:
            lo = kappa + 1
    if _phi(tasks, q.gamma, lo) > lo:
        raise InternalInvariantViolated(f"jitter-free search returned infeasible t={lo}")
    return lo


_DISPATCH = {
    "bruteforce": response_bruteforce,
    "harmonic": response_harmonic,
    "lcm-scan": response_lcm_scan,
    "turing": response_turing,
    "jitter-free": response_jitter_free,
}


def compute_response(q: ResponseQuery, algorithm: Algorithm = "auto", cap: int | None = None) -> int:
    """Run the selected algorithm; "auto" picks the fastest applicable one."""
    if algorithm == "auto":
        tasks = q.interferers()
        if is_harmonic([t.p for t in tasks]):
            return response_harmonic(q, cap=cap)
        if all(t.jitter == 0 for t in tasks):
            return response_jitter_free(q, cap=cap)
        return response_turing(q, cap=cap)
    if algorithm == "harmonic":
        return response_harmonic(q, cap=cap)
    try:
        fn = _DISPATCH[algorithm]
    except KeyError:
        raise InvalidInstance(f"unknown algorithm {algorithm!r}") from None
    return fn(q, cap)


@dataclass(frozen=True)
class TaskVerdict:
    index: int
    response: int
    deadline_budget: int  # d_j - jitter_j
    schedulable: bool


@dataclass(frozen=True)
class SystemVerdict:
    tasks: tuple[TaskVerdict, ...]
    schedulable: bool

    def responses(self) -> tuple[int, ...]:
        return tuple(t.response for t in self.tasks)


def analyze_system(
    ts: TaskSystem, algorithm: Algorithm = "auto", cap: int | None = None
) -> SystemVerdict:
    """Per-task responses r_j = response([0..j-1], c_j) and the schedulability
    verdict r_j <= d_j - jitter_j; the system verdict is their conjunction."""
    validate(ts)
    if any(t.d is None for t in ts.tasks):
        raise PreconditionViolated("schedulability analysis requires deadlines on every task")
    verdicts = []
    for j, task in enumerate(ts.tasks):
        q = ResponseQuery(ts, range(j), task.c)
        r = compute_response(q, algorithm, cap)
        budget = task.d - task.jitter
        verdicts.append(TaskVerdict(j, r, budget, r <= budget))
    return SystemVerdict(tuple(verdicts), all(v.schedulable for v in verdicts))
