"""Exception hierarchy shared by every module."""

from __future__ import annotations


class GroupError(Exception):
    """Base class for errors raised by this package."""


class DegreeMismatch(GroupError):
    pass


class OrderBoundExceeded(GroupError):
    def __init__(self, order: int, bound: int, what: str = "group"):
        super().__init__(f"{what} of order {order} exceeds bound {bound}")
        self.order = order
        self.bound = bound


class ElementNotInGroup(GroupError):
    pass


class ParentMismatch(GroupError):
    pass


class NotASubgroupOf(GroupError):
    pass


class NotNormal(GroupError):
    pass


class NotAHomomorphism(GroupError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class MissingPreradical(GroupError):
    pass


class LiteralReadingUndefined(GroupError):
    """The literal triple-prime formula needs c_G(H) <= r(G)."""


class CodomainNotSimple(GroupError):
    pass


class ZeroHomomorphism(GroupError):
    pass


class NotSubnormal(GroupError):
    def __init__(self, message: str, subgroup=None):
        super().__init__(message)
        self.subgroup = subgroup


class AdditivityViolated(GroupError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class WielandtViolation(GroupError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class CodomainNotInSubcategory(GroupError):
    pass


class ParseError(GroupError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class QuantifierCheckInfeasible(UserWarning):
    """Literal subgroup quantifier skipped because the quotient is infinite."""
