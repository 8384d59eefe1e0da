"""Exception types shared across the toolkit."""


class HQEError(Exception):
    """Base class for all toolkit errors."""


class PrecisionExhausted(HQEError):
    """A quantity or predicate is not determined at the available precision.

    Raised instead of guessing: an element that is zero to its known digits
    need not be an exact zero, and no operation may pretend otherwise.
    """


class DivisionByZero(HQEError):
    """Division by an exact zero."""


class NegativeValue(HQEError):
    """An operation required a nonnegative valuation and did not get one."""


class OrderMismatch(HQEError):
    """Leading-term operands live in structures of different order."""


class OrderViolation(HQEError):
    """A projection was requested to an order above the operand's order."""


class PreconditionViolated(HQEError):
    """A stated hypothesis (Hensel bound, collision severity, ...) fails."""


class NotInPiece(HQEError):
    """A point was evaluated against a piece that does not contain it."""


class RecursionBound(HQEError):
    """Defensive cap on a recursion whose mathematical measure should
    terminate long before the cap is reached."""


class NonEffectiveQuantifier(HQEError):
    """A quantifier over a leading-term sort does not match any of the
    effectively evaluable patterns."""


class FormulaSyntaxError(HQEError):
    """Parse failure, with position information."""

    def __init__(self, message, pos=None):
        super().__init__(message if pos is None else f"{message} (at position {pos})")
        self.pos = pos
