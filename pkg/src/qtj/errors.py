"""Exception hierarchy.

Input problems (malformed text, out-of-range values) derive from
:class:`InputError`; numeric degeneracies (poles, vanishing discriminants,
precision exhaustion) derive from :class:`NumericError`.  The CLI maps the
two families to exit codes 2 and 3.
"""


class QTJError(Exception):
    """Base class for all package errors."""


class InputError(QTJError, ValueError):
    pass


class NumericError(QTJError, ArithmeticError):
    pass


class ZeroToNegativePower(NumericError):
    pass


class PrecisionMismatch(InputError):
    pass


class MoebiusPole(NumericError):
    pass


class ZeroDenominator(NumericError):
    pass


class PrecisionExhausted(NumericError):
    pass


class EmptySet(InputError):
    pass


class ExactModeUnavailable(InputError):
    pass


class PoleEncountered(NumericError):
    pass


class DegenerateDiscriminant(NumericError):
    pass


class SchemaViolation(NumericError):
    """Payload failed validation against its published schema."""


class IoFailure(QTJError, OSError):
    pass
