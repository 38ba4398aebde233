"""Typed errors shared across the package."""


class ZolotoError(Exception):
    """Base class for all package errors."""


class ParseError(ZolotoError):
    """Malformed measure/plan file or invalid construction data."""


class DimensionMismatch(ZolotoError):
    """Operands live in different ambient dimensions."""


class BarycentreMismatch(ZolotoError):
    """Barycentres differ beyond tolerance; Z2 is infinite for such pairs."""

    def __init__(self, message, mismatch=None):
        super().__init__(message)
        self.mismatch = mismatch


class NotInConvexOrder(ZolotoError):
    """No martingale coupling exists between the given measures."""


class InfeasibleSupport(ZolotoError):
    """Candidate support admits no common convex dominator."""


class NotConverged(ZolotoError):
    """Solver stopped before reaching its target tolerance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NotCertified(ZolotoError):
    """Certification gap stayed above tolerance; carries the best bracket."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
