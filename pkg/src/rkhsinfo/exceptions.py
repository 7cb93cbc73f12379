"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: :class:`InvalidInputError` (and its
subclasses) to 1, :class:`NumericalFailureError` to 2.
"""


class InvalidInputError(ValueError):
    """Input violates a documented precondition or type invariant."""


class DegenerateInputError(InvalidInputError):
    """Input is well-formed but degenerate (zero variance, collinear design, ...)."""


class NumericalFailureError(ArithmeticError):
    """A computation produced a value that is impossible in exact arithmetic.

    Typically a squared RKHS norm that is negative beyond rounding, which
    points at a kernel that is not positive definite on the data.
    """
