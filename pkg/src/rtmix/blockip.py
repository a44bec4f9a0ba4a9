"""Simple 4-block integer programs and their dualized binary-search solver.

The programs have one coupling inequality a^T x >= b0 on top of a
block-diagonal system of equalities

    B_i x^(0) + A_i x^(i) = rhs_i      (brick i = 1..n)

with box bounds 0 <= x <= u, and an objective that touches only the first
brick x^(0) and at most one other brick j.  Minimizing w^T x reduces, for a
probe value k, to the decision

    max { a^T x  :  w^T x + y = k,  blocks,  boxes,  y >= 0 }  >=  b0,

a two-stage program: once x^(0) is fixed the bricks decouple and each brick
maximizes its share of a independently.  `solve_2stage_desk` exploits exactly
that - first-stage enumeration over the x^(0) box, then an exact per-brick
search with interval-propagation pruning - under an explicit node budget.
`solve_simple_4block` wraps it into the binary search for the least feasible
k (the decisions are monotone in k because y only relaxes).

`encode_rtc_as_4block` expresses jitter-free response-time computation in
this shape: one first-stage variable t, one brick (x_i, z_i) per interfering
task with equality p_i*x_i - t - z_i = 0, and coupling t - sum c_i*x_i >= c_n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import TaskSystem, bounds_from_parts, ceil_div, utilization, validate
from .errors import (
    BudgetExceeded,
    Infeasible,
    InvalidInstance,
    PreconditionViolated,
    UtilizationExceeded,
)

Matrix = tuple[tuple[int, ...], ...]

DEFAULT_NODE_BUDGET = 5_000_000


def _matrix(rows, r, cols, what: str) -> Matrix:
    mat = tuple(tuple(int(v) for v in row) for row in rows)
    if len(mat) != r or any(len(row) != cols for row in mat):
        raise InvalidInstance(f"{what}: expected a {r}x{cols} integer matrix")
    return mat


@dataclass(frozen=True)
class SimpleFourBlock:
    """n bricks of width t over a first stage of width s, r equality rows per
    brick, one coupling inequality (q = 1)."""

    n: int
    r: int
    s: int
    t: int
    D: Matrix                      # 1 x s   coupling coefficients on x^(0)
    C: tuple[Matrix, ...]          # n of 1 x t
    B: tuple[Matrix, ...]          # n of r x s
    A: tuple[Matrix, ...]          # n of r x t
    b0: int
    rhs: tuple[tuple[int, ...], ...]  # n of length r
    w0: tuple[int, ...]            # objective on x^(0)
    j: int | None                  # addressed brick (1-based), None if n = 0
    wj: tuple[int, ...]            # objective on brick j
    u: tuple[int, ...]             # box bounds, length s + n*t

    def __post_init__(self):
        n, r, s, t = self.n, self.r, self.s, self.t
        if n < 0 or s < 1 or t < 0 or r < 0:
            raise InvalidInstance("dimensions must satisfy n,r,t >= 0 and s >= 1")
        _matrix(self.D, 1, s, "D")
        if len(self.C) != n or len(self.B) != n or len(self.A) != n or len(self.rhs) != n:
            raise InvalidInstance("need exactly one C, B, A, rhs block per brick")
        for i in range(n):
            _matrix(self.C[i], 1, t, f"C[{i}]")
            _matrix(self.B[i], r, s, f"B[{i}]")
            _matrix(self.A[i], r, t, f"A[{i}]")
            if len(self.rhs[i]) != r:
                raise InvalidInstance(f"rhs[{i}] must have length {r}")
        if len(self.w0) != s:
            raise InvalidInstance(f"w0 must have length {s}")
        if n == 0:
            if self.j is not None:
                raise InvalidInstance("j must be None when there are no bricks")
        elif self.j is None or not 1 <= self.j <= n:
            raise InvalidInstance(f"addressed brick j={self.j} out of range 1..{n}")
        if len(self.wj) != t:
            raise InvalidInstance(f"wj must have length {t}")
        if any(v < 0 for v in self.w0) or any(v < 0 for v in self.wj):
            raise InvalidInstance("objective weights must be nonnegative")
        if len(self.u) != s + n * t:
            raise InvalidInstance(f"box bounds must have length {s + n * t}")
        if any(v < 0 for v in self.u):
            raise InvalidInstance("box bounds must be nonnegative")

    def coupling_row(self) -> tuple[int, ...]:
        row = list(self.D[0])
        for i in range(self.n):
            row.extend(self.C[i][0])
        return tuple(row)

    def u_first(self) -> tuple[int, ...]:
        return self.u[: self.s]

    def u_brick(self, i: int) -> tuple[int, ...]:
        lo = self.s + i * self.t
        return self.u[lo : lo + self.t]


@dataclass(frozen=True)
class TwoStageProgram:
    """The dualized decision program for a probe k.

    The addressed brick carries one extra row w0 . x^(0) + wj . x^(j) + y = k
    and one extra variable y in [0, y_max]; the objective maximizes the
    coupling row.
    """

    source: SimpleFourBlock
    k: int

    @property
    def y_max(self) -> int:
        # objective weights and variables are nonnegative, so y <= k
        return max(0, self.k)

    def stitched_rows(self) -> tuple[tuple[tuple[int, ...], int], ...]:
        """Explicit rows of the stitched system over (x^(0), x^(1..n), y):
        per-brick equalities plus the slack row, each paired with its
        right-hand side."""
        p = self.source
        width = p.s + p.n * p.t + 1
        rows = []
        for i in range(p.n):
            for ri in range(p.r):
                row = [0] * width
                row[: p.s] = p.B[i][ri]
                off = p.s + i * p.t
                row[off : off + p.t] = p.A[i][ri]
                rows.append((tuple(row), p.rhs[i][ri]))
            if p.j is not None and i == p.j - 1:
                row = [0] * width
                row[: p.s] = p.w0
                off = p.s + i * p.t
                row[off : off + p.t] = p.wj
                row[-1] = 1
                rows.append((tuple(row), self.k))
        if p.j is None:
            row = [0] * width
            row[: p.s] = p.w0
            row[-1] = 1
            rows.append((tuple(row), self.k))
        return tuple(rows)


def transform_to_2stage(p: SimpleFourBlock, k: int) -> TwoStageProgram:
    """Stitch the slack row for w^T x <= k on top of the addressed brick."""
    if not isinstance(p, SimpleFourBlock):
        raise InvalidInstance("expected a SimpleFourBlock")
    return TwoStageProgram(p, k)


class _Budget:
    __slots__ = ("left", "budget")

    def __init__(self, budget: int):
        self.left = budget
        self.budget = budget

    def spend(self, amount: int = 1) -> None:
        self.left -= amount
        if self.left < 0:
            raise BudgetExceeded(self.budget - self.left, self.budget)


def _max_brick(
    a_obj: Sequence[int],
    rows: Sequence[Sequence[int]],
    rhs: Sequence[int],
    boxes: Sequence[int],
    budget: _Budget,
) -> int | None:
    """Exact max of a_obj . x over integer x in the boxes with rows . x = rhs.

    Depth-first assignment with interval propagation: a partial assignment is
    pruned as soon as some row's residual cannot be covered by the remaining
    variables' coefficient ranges.
    """
    nvars = len(boxes)
    residual = list(rhs)
    # per-row suffix interval of reachable contributions
    lo_suffix = [[0] * len(rows) for _ in range(nvars + 1)]
    hi_suffix = [[0] * len(rows) for _ in range(nvars + 1)]
    for v in range(nvars - 1, -1, -1):
        for ri, row in enumerate(rows):
            contrib_lo = min(0, row[v] * boxes[v])
            contrib_hi = max(0, row[v] * boxes[v])
            lo_suffix[v][ri] = lo_suffix[v + 1][ri] + contrib_lo
            hi_suffix[v][ri] = hi_suffix[v + 1][ri] + contrib_hi

    best: int | None = None

    def solve(v: int, acc_obj: int) -> None:
        nonlocal best
        budget.spend()
        if v == nvars:
            if all(r == 0 for r in residual):
                if best is None or acc_obj > best:
                    best = acc_obj
            return
        for ri in range(len(rows)):
            if not lo_suffix[v][ri] <= residual[ri] <= hi_suffix[v][ri]:
                return
        for val in range(boxes[v] + 1):
            for ri, row in enumerate(rows):
                residual[ri] -= row[v] * val
            solve(v + 1, acc_obj + a_obj[v] * val)
            for ri, row in enumerate(rows):
                residual[ri] += row[v] * val

    solve(0, 0)
    return best


def solve_2stage_desk(
    tp: TwoStageProgram, node_budget: int | None = None
) -> int | None:
    """Exact maximum of the coupling row over the two-stage feasible set,
    or None when infeasible.  Raises BudgetExceeded past the node budget."""
    p = tp.source
    budget = _Budget(DEFAULT_NODE_BUDGET if node_budget is None else node_budget)
    a0 = p.D[0]
    slack_idx = None if p.j is None else p.j - 1
    best: int | None = None

    def first_stage(v: int, x0: list[int]) -> None:
        nonlocal best
        budget.spend()
        if v < p.s:
            for val in range(p.u_first()[v] + 1):
                x0[v] = val
                first_stage(v + 1, x0)
            return
        total = sum(a0[i] * x0[i] for i in range(p.s))
        for i in range(p.n):
            rows = [list(p.A[i][ri]) for ri in range(p.r)]
            rhs = [
                p.rhs[i][ri] - sum(p.B[i][ri][c] * x0[c] for c in range(p.s))
                for ri in range(p.r)
            ]
            boxes = list(p.u_brick(i))
            a_obj = list(p.C[i][0])
            if i == slack_idx:
                # extra row: wj . x^(j) + y = k - w0 . x^(0), with slack var y
                rows = [row + [0] for row in rows]
                rows.append(list(p.wj) + [1])
                rhs.append(tp.k - sum(p.w0[c] * x0[c] for c in range(p.s)))
                boxes.append(tp.y_max)
                a_obj.append(0)
            part = _max_brick(a_obj, rows, rhs, boxes, budget)
            if part is None:
                return
            total += part
        if slack_idx is None:
            # no addressed brick: the slack row reduces to w0 . x^(0) + y = k
            y = tp.k - sum(p.w0[c] * x0[c] for c in range(p.s))
            if y < 0:
                return
        if best is None or total > best:
            best = total

    first_stage(0, [0] * p.s)
    return best


def solve_simple_4block(
    p: SimpleFourBlock,
    H: int | None = None,
    node_budget: int | None = None,
) -> int:
    """Least k in [-H, H] whose dual decision reaches the coupling bound b0.

    H defaults to sum w_i * u_i, a sound bound on |w^T x| over the boxes.
    Raises Infeasible when no k in the window passes.
    """
    if H is None:
        H = _default_objective_bound(p)
    lo, hi = -H, H
    value = solve_2stage_desk(transform_to_2stage(p, hi), node_budget)
    if value is None or value < p.b0:
        raise Infeasible(f"no objective value in [-{H}, {H}] satisfies the coupling bound")
    while lo < hi:
        mid = (lo + hi) // 2
        value = solve_2stage_desk(transform_to_2stage(p, mid), node_budget)
        if value is not None and value >= p.b0:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _default_objective_bound(p: SimpleFourBlock) -> int:
    bound = sum(w * u for w, u in zip(p.w0, p.u_first()))
    if p.j is not None:
        bound += sum(w * u for w, u in zip(p.wj, p.u_brick(p.j - 1)))
    return max(1, bound)


def rtc_inequality_matrix(ts: TaskSystem) -> tuple[Matrix, tuple[int, ...]]:
    """The compact all-inequality form of jitter-free response-time
    computation: first row (1, -c_1, ..., -c_{n-1}) >= c_n, then
    -t + p_i x_i >= 0 per interferer."""
    validate(ts)
    if any(t.jitter != 0 for t in ts.tasks):
        raise PreconditionViolated("the compact matrix form requires a jitter-free system")
    n = len(ts.tasks)
    head = [1] + [-t.c for t in ts.tasks[:-1]]
    rows = [tuple(head)]
    rhs = [ts.tasks[-1].c]
    for i, task in enumerate(ts.tasks[:-1]):
        row = [0] * n
        row[0] = -1
        row[i + 1] = task.p
        rows.append(tuple(row))
        rhs.append(0)
    return tuple(rows), tuple(rhs)


def encode_rtc_as_4block(ts: TaskSystem, cap: int | None = None) -> SimpleFourBlock:
    """Jitter-free response-time computation as a simple 4-block program.

    First stage: the candidate time t, box [0, u] from the certified bounds.
    Brick i: (x_i, z_i) with p_i*x_i - t - z_i = 0; the multiplier box comes
    from the same bounds and the slack box [0, p_i - 1] is tight because any
    solution with z_i >= p_i lowers its objective by decrementing x_i.
    """
    validate(ts)
    if any(t.jitter != 0 for t in ts.tasks):
        raise PreconditionViolated("4-block encoding requires a jitter-free system")
    if utilization(ts, exclude_last=True) >= 1:
        raise UtilizationExceeded("interfering utilization >= 1")
    bounds = bounds_from_parts(ts.tasks[-1].c, ts.tasks[:-1], cap)
    u_t = bounds.u
    interferers = ts.tasks[:-1]
    n = len(interferers)
    boxes = [u_t]
    for task in interferers:
        boxes.extend([ceil_div(u_t + task.p, task.p), task.p - 1])
    return SimpleFourBlock(
        n=n,
        r=1 if n else 0,
        s=1,
        t=2 if n else 0,
        D=((1,),),
        C=tuple(((-task.c, 0),) for task in interferers),
        B=tuple(((-1,),) for _ in interferers),
        A=tuple(((task.p, -1),) for task in interferers),
        b0=ts.tasks[-1].c,
        rhs=tuple((0,) for _ in interferers),
        w0=(1,),
        j=1 if n else None,
        wj=(0, 0) if n else (),
        u=tuple(boxes),
    )
