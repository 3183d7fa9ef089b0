"""Exception types shared across the toolkit.

Everything user-facing derives from RtslError so the CLI can catch one
base class and exit with a usage/check error code.
"""


class RtslError(Exception):
    pass


class OverlapError(RtslError):
    """Union of two heaps whose domains intersect."""


class LimitError(RtslError):
    """A configured enumeration limit (partitions, unfold budget) was hit."""


class UnknownVariable(RtslError):
    """Read or write of a variable outside the declared set."""


class NotAllocated(RtslError):
    """Heap write/remove at a location outside the heap's domain."""


class DivByZero(RtslError):
    pass


class ProbRangeError(RtslError):
    """A probability expression evaluated outside [0, 1]."""


class SignedOverflow(RtslError):
    """Signed subtraction with an infinite subtrahend."""


class PotentialNotFinite(RtslError):
    """A potential evaluated to infinity (or below zero) where finiteness
    is part of the contract."""


class ImpreciseMonus(RtslError):
    """Left operand of a separating monus is outside the precise fragment."""


class UnboundedQuantifier(RtslError):
    """A quantifier with no explicit range and no guided binding."""


class SideConditionError(RtslError):
    """A theorem side condition (modified vars vs. frame vars) is violated."""


class MembershipError(RtslError):
    """A candidate invariant drops below -potential somewhere."""


class ExplosionError(RtslError):
    """Reachable-configuration exploration exceeded its cap."""


class SpecError(RtslError):
    """Malformed state-generator or corpus-entry description."""


class ParseError(RtslError):
    """Concrete-syntax error, carrying a source position."""

    def __init__(self, message, line, col):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
