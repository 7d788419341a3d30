"""Exception types shared across the package."""


class FesError(Exception):
    """Base class for all errors raised by this package."""


class SizeGuardExceeded(FesError):
    """A computation would exceed the configured size/cost bound."""


class NonMonotoneDetected(FesError):
    """Fixpoint iteration was requested for a function that is not monotone."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnknownOp(FesError):
    """An expression refers to an operator that is not registered."""


class ArityMismatch(FesError):
    """A registered operator was applied to the wrong number of arguments."""


class UnknownVariable(FesError):
    """A variable name is not part of the equation system."""


class MonotonicityRequired(FesError):
    """The operation is only sound for monotone equation systems."""


class PreconditionFailed(FesError):
    """A transformation's side condition does not hold.

    ``condition`` names the failed check; ``witness`` carries supporting
    evidence (e.g. a dependency path) when one exists.
    """

    def __init__(self, condition, witness=None):
        super().__init__(condition)
        self.condition = condition
        self.witness = witness


class NotBooleanLattice(FesError):
    """A Boolean-only operation was applied over a different lattice."""


class OpenSystem(FesError):
    """Gauss elimination requires the specification to cover all variables."""


class ParseError(FesError):
    """Syntax or semantic error in the FES text format."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"{line}:{column if column is not None else '?'}: "
        super().__init__(f"{loc}{message}")
        self.line = line
        self.column = column
