"""Exception types raised by the legsum library.

Every domain failure derives from :class:`LegsumError` so callers (and the
CLI) can distinguish "the input or request is bad" from programming errors.
"""

from __future__ import annotations


class LegsumError(Exception):
    """Base class for all domain errors raised by legsum."""


# --- document / input errors -------------------------------------------------

class ParseError(LegsumError):
    """Input text is not syntactically valid (JSON, word grammar, flags)."""


class SchemaError(LegsumError):
    """Input parsed but does not match the expected document shape."""


class RangeInvalid(LegsumError):
    """A mountain range violates its structural invariants.

    Carries the full list of violations so callers can report them all.
    """

    def __init__(self, violations):
        self.violations = tuple(violations)
        lines = "; ".join(f"{v.code}: {v.message}" for v in self.violations)
        super().__init__(f"invalid mountain range: {lines}")


class NonIntegralValley(LegsumError):
    """Adjacent peaks whose connecting valley is not a lattice point."""


class MisplacedValley(LegsumError):
    """Adjacent peaks whose connecting valley does not sit strictly between them."""


class NotAMember(LegsumError):
    """A class was used with a range that does not contain its (tb, r) point."""


class InvalidSummand(LegsumError):
    """A connected-sum spec references an invalid or non-prime summand."""


class MultiplicityMismatch(LegsumError):
    """A factor tuple does not match the multiplicities of its sum spec."""


# --- window / poset errors ---------------------------------------------------

class WindowEmpty(LegsumError):
    """Requested truncation window lies entirely above the top level."""


class WindowTooShallow(LegsumError):
    """A verdict needs rows above the known part of a truncated poset."""


# --- path errors --------------------------------------------------------------

class LengthMismatch(LegsumError):
    """A multi-path check was given words of differing lengths."""


class Truncated(LegsumError):
    """A path word stepped below the floor of a truncated poset."""


class InvariantMismatch(LegsumError):
    """Endpoint pairs of a path search have different summed invariants."""


# --- simplicity errors ---------------------------------------------------------

class WrongPeakCount(LegsumError):
    """An operation specific to two-peak ranges was given something else."""


class NotApplicable(LegsumError):
    """The requested construction does not exist for this sum spec."""
