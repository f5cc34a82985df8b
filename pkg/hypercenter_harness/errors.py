"""Exceptions raised by the harness.

Every error is a ``GroupError`` (and therefore a ``ValueError``), so callers that only
care about "bad input" can catch one type.
"""

from typing import Optional, Tuple


class GroupError(ValueError):
    """Base class for all harness errors."""


class NotClosed(GroupError):
    """A table entry lies outside ``[0, n)``."""

    def __init__(self, x: int, y: int, value: int):
        self.x, self.y, self.value = x, y, value
        super().__init__(f"table not closed: mul[{x}][{y}] = {value}")


class NotAssociative(GroupError):
    """``(xy)z != x(yz)`` for the recorded triple."""

    def __init__(self, triple: Tuple[int, int, int]):
        self.triple = triple
        x, y, z = triple
        super().__init__(f"table not associative at (x, y, z) = ({x}, {y}, {z})")


class NoIdentity(GroupError):
    def __init__(self):
        super().__init__("table has no two-sided identity")


class NoInverse(GroupError):
    def __init__(self, element: int):
        self.element = element
        super().__init__(f"element {element} has no two-sided inverse")


class NotNormal(GroupError):
    def __init__(self, element: int, conjugator: int):
        self.element, self.conjugator = element, conjugator
        super().__init__(
            f"subgroup not normal: conjugating {element} by {conjugator} leaves it"
        )


class NotInvariant(GroupError):
    def __init__(self, element: int, automorphism_index: Optional[int] = None):
        self.element, self.automorphism_index = element, automorphism_index
        super().__init__(
            f"subgroup not invariant: automorphism {automorphism_index} moves {element} outside"
        )


class NotAChain(GroupError):
    """Raised when a supplied series is not an ascending chain of normal subgroups."""


class NotAutomorphism(GroupError):
    """An image array is not a bijective multiplication-preserving self-map."""


class CapExceeded(GroupError):
    def __init__(self, what: str, size: int, cap: int):
        self.what, self.size, self.cap = what, size, cap
        super().__init__(f"{what} of size {size} exceeds configured cap {cap}")


class NotOddPrime(GroupError):
    def __init__(self, p: int):
        self.p = p
        super().__init__(f"{p} is not an odd prime")


class PremiseFailed(GroupError):
    """A check's hypotheses do not hold on the supplied instance."""


class BoundOverflow(GroupError, OverflowError):
    def __init__(self, name: str, t: int, cap: int):
        self.name, self.t, self.cap = name, t, cap
        super().__init__(f"{name}({t}) is beyond the evaluation cap t <= {cap}")


class ParseError(GroupError):
    def __init__(self, message: str, line: int = 0, column: int = 0, path: str = ""):
        self.line, self.column, self.path = line, column, path
        where = f"{path}:" if path else ""
        super().__init__(f"{where}{line}:{column}: {message}")


class ReportWriteError(GroupError):
    """Writing a report document failed."""
