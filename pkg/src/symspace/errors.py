"""Exception taxonomy for symspace.

Every numerical-domain failure raises a distinct subclass of
:class:`SymSpaceError` so callers can react to the precise failure mode
(branch cut hit, chart left, iteration diverged, ...) instead of parsing
messages.
"""

__all__ = [
    "SymSpaceError",
    "ShapeError",
    "ExpOverflowError",
    "LogBranchError",
    "SingularError",
    "DegenerateSignatureError",
    "TangentError",
    "ChartDomainError",
    "CutLocusError",
    "RankError",
    "HorizonError",
    "UnsupportedBasisError",
    "KarcherDivergenceError",
]


class SymSpaceError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(SymSpaceError, ValueError):
    """Operands have incompatible dimensions."""


class ExpOverflowError(SymSpaceError, ArithmeticError):
    """Matrix exponential overflowed for an extreme-norm input."""


class LogBranchError(SymSpaceError, ValueError):
    """Input has an eigenvalue on the closed negative real axis, where the
    principal logarithm / square root is undefined."""


class SingularError(SymSpaceError, ValueError):
    """Input matrix is singular to working precision."""


class DegenerateSignatureError(SymSpaceError, ValueError):
    """Symmetric matrix has a near-zero eigenvalue; its signature is not
    numerically well defined."""


class TangentError(SymSpaceError, ValueError):
    """Matrix does not satisfy the defining constraint of the tangent
    parameterization (Lie-triple-system membership, horizontality)."""


class ChartDomainError(SymSpaceError, ValueError):
    """Point lies outside the domain of the chart in use.

    ``index`` identifies the offending datum in a batched call, when known.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class CutLocusError(ChartDomainError):
    """Subspace is at (or numerically near) a principal angle of pi/2 from
    the base, beyond the injectivity radius of the chart."""


class RankError(SymSpaceError, ValueError):
    """Matrix does not have the full column rank the operation requires."""


class HorizonError(SymSpaceError, ValueError):
    """Evaluation point lies at or inside the Schwarzschild radius."""


class UnsupportedBasisError(SymSpaceError, ValueError):
    """Requested shape-function family lies outside the supported range."""


class KarcherDivergenceError(SymSpaceError, RuntimeError):
    """Fixed-point iteration for the weighted Riemannian mean did not reach
    the requested residual.  Carries the last residual seen."""

    def __init__(self, message, residual, iterations):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations
