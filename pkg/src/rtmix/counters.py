"""Solver-maintained operation counters.

The complexity claims of the algorithms in this package are stated as
arithmetic-operation counts, so benchmarks report these counters next to wall
time.  Counting is off unless a `collect()` context is active; solvers call
`bump()` unconditionally, which is a no-op outside a collection scope.
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field


@dataclass
class Counters:
    mixing_calls: int = 0      # mixing-set solves
    mixing_ops: int = 0        # arithmetic ops inside mixing solves
    decision_probes: int = 0   # dualized decision-oracle invocations
    fixpoint_iters: int = 0    # iterations of the ceiling-recurrence baseline
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "mixing_calls": self.mixing_calls,
            "mixing_ops": self.mixing_ops,
            "decision_probes": self.decision_probes,
            "fixpoint_iters": self.fixpoint_iters,
        }
        out.update(self.extra)
        return out


_active: ContextVar[Counters | None] = ContextVar("rtmix_counters", default=None)


def bump(name: str, amount: int = 1) -> None:
    c = _active.get()
    if c is None:
        return
    if hasattr(c, name):
        setattr(c, name, getattr(c, name) + amount)
    else:
        c.extra[name] = c.extra.get(name, 0) + amount


@contextmanager
def collect():
    """Activate a fresh counter set for the dynamic extent of the block."""
    c = Counters()
    token = _active.set(c)
    try:
        yield c
    finally:
        _active.reset(token)
