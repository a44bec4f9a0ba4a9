"""Exception hierarchy shared by all solver modules.

The CLI maps these onto exit codes: invalid input -> 2, resource limits
(overflow caps, enumeration budgets) -> 3, infeasible/unbounded outcomes -> 1.
"""


class RTMixError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInstance(RTMixError):
    """An input object violates one of its structural invariants."""


class PreconditionViolated(RTMixError):
    """An operation was called outside its documented domain."""


class PreconditionKTooSmall(PreconditionViolated):
    """A decision probe k was below the certified search bound S."""

    def __init__(self, k: int, bound: int):
        super().__init__(f"decision probe k={k} is below the certified bound S={bound}")
        self.k = k
        self.bound = bound


class UtilizationExceeded(RTMixError):
    """Higher-priority utilization is >= 1, so no finite response time exists."""


class OverflowLimit(RTMixError):
    """An lcm (or similar product) exceeded the configured magnitude cap."""


class Unbounded(RTMixError):
    """The optimization problem has no finite optimum."""


class Infeasible(RTMixError):
    """No feasible point exists in the searched range."""


class BudgetExceeded(RTMixError):
    """The exact enumeration backend ran past its node budget."""

    def __init__(self, explored: int, budget: int):
        super().__init__(f"enumeration budget exhausted after {explored} nodes (budget {budget})")
        self.explored = explored
        self.budget = budget


class GenerationFailed(RTMixError):
    """Rejection sampling did not produce a valid instance within the attempt cap."""


class HorizonTooSmall(RTMixError):
    """A released job could not finish before the simulation horizon."""


class InternalInvariantViolated(RTMixError):
    """A certified identity failed; indicates an arithmetic bug, not bad input."""
