"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An input lies outside the range where a bound or construction applies."""


class TheoremViolation(AssertionError):
    """A proven inequality or structural identity failed numerically.

    Seeing one of these means either an arithmetic bug or a false claim;
    both need a human.
    """


class IndeterminateError(ArithmeticError):
    """Ball arithmetic could not decide a comparison within the precision cap."""


class ResourceLimitError(RuntimeError):
    """The requested computation exceeds a configured size cap."""
