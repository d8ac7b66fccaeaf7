"""Exception taxonomy.

Domain errors say the input is mathematically unsuitable; usage errors say
the input is malformed; TheoremViolation subclasses signal that a verified
identity failed to hold, which always means a bug, never bad input.
"""


class AffineError(Exception):
    """Base class for everything raised on purpose by this package."""


# --- domain errors: well-formed input, wrong mathematical shape ---

class UnknownSymbol(AffineError):
    pass


class ArityMismatch(AffineError):
    pass


class VariableOutOfRange(AffineError):
    pass


class SignatureMismatch(AffineError):
    pass


class ShapeMismatch(AffineError):
    pass


class NotACongruence(AffineError):
    pass


class NotInVariety(AffineError):
    pass


class NotInjective(AffineError):
    pass


class NotStable(AffineError):
    pass


# --- usage errors ---

class ParseError(AffineError):
    pass


class ValidationError(AffineError):
    pass


# --- resource guard ---

class BudgetExceeded(AffineError):
    pass


# --- theorem contradictions: any of these is a bug in this package ---

class TheoremViolation(AffineError):
    pass


class AssertionFailure(TheoremViolation):
    pass


class EquivalenceViolation(TheoremViolation):
    pass


class BijectionFailure(TheoremViolation):
    pass
