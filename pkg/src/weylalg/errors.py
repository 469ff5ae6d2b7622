"""Exception hierarchy for the engine.

Every failure mode that callers are expected to branch on gets its own
class; the CLI maps these onto documented exit codes.
"""


class WeylError(Exception):
    """Base class for all engine errors."""


class ContextError(WeylError):
    """Operands built over different contexts, or invalid context parameters."""


class InternalError(WeylError):
    """An internal invariant was violated; indicates a bug, not bad input."""


# expression language / record files

class ExprError(WeylError):
    """Base class for parse-side failures."""


class ExprSyntaxError(ExprError):
    """Malformed expression text. Carries a 1-based line and column."""

    def __init__(self, message, line, col):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class UnknownVariableError(ExprSyntaxError):
    """An identifier that is not i, h, or a variable valid for the context."""


class ExponentOverflowError(ExprSyntaxError):
    """Exponent literal beyond the supported bound."""


class RecordError(WeylError):
    """A record file with the right syntax but the wrong shape or schema."""


# matrices

class MatrixError(WeylError):
    pass


class SingularMatrixError(MatrixError):
    """Matrix failed the exact invertibility check."""


class NotSymplecticError(MatrixError):
    """M^T J M != J."""


class NotConformalError(MatrixError):
    """M^T J M is not a scalar multiple of J."""


# automorphisms

class AutomorphismError(WeylError):
    pass


class InvalidImageError(AutomorphismError):
    """A generator image has a grade-0 component (not in X_1)."""


class HbarScaleError(AutomorphismError):
    """Operation requires hbar_scale = 1."""


class KernelPreconditionError(AutomorphismError):
    """log/exp requires identity linear part (resp. images of grade >= 2)."""


class InnerGeneratorError(AutomorphismError):
    """Inner automorphism generator must lie in X_3."""


# factorization

class FactorizationError(WeylError):
    pass


class LinearPartNotInvertibleError(FactorizationError):
    pass


class LinearPartNotSymplecticError(FactorizationError):
    pass


class ClosednessError(FactorizationError):
    """Gradient 1-form of the logarithm is not closed: input was not a morphism."""


class ResidualMismatchError(FactorizationError):
    """Recomposed factorization does not reproduce the input (internal inconsistency)."""
