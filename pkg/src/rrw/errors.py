"""Exception types shared across the package."""


class RrwError(Exception):
    """Base class for all package-specific errors."""


class CycleError(RrwError):
    """A strict order's transitive closure contains (i, i)."""


class ValidationError(RrwError):
    """A system violates a structural invariant.

    Carries the full list of violations so callers can report them all.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class KindError(RrwError):
    """An operation received a system of the wrong kind."""


class ModeError(RrwError):
    """An operation received a mode outside its supported set."""


class PermitPresent(RrwError):
    """An entry condition carries permit symbols where only forbid sets are allowed."""


class UnknownLabel(RrwError):
    """A graph-control configuration references a label that does not exist."""


class BudgetExceeded(RrwError):
    """A closure computation ran out of step or form budget.

    ``partial`` holds the (incomplete) result computed so far.
    """

    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


class GrammarSyntaxError(RrwError):
    """A document failed to parse; carries a source span."""

    def __init__(self, message, span=None):
        self.span = span
        if span is not None:
            message = f"{span}: {message}"
        super().__init__(message)
