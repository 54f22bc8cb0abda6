"""Exception hierarchy."""


class OrthofitError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(OrthofitError, ValueError):
    """Shapes or lengths of the operands do not agree."""


class NonFiniteError(OrthofitError, ValueError):
    """NaN or infinity supplied where finite reals are required."""


class DegeneracyError(OrthofitError, ArithmeticError):
    """The numerical problem is degenerate for the requested method."""


class DegenerateRegressorError(DegeneracyError):
    """The regressor has (numerically) zero variance."""


class SingularSystemError(DegeneracyError):
    """The normal-equations system is singular to working precision."""


class SolverDiscrepancyError(DegeneracyError):
    """Two solvers disagree on the fitted values beyond tolerance."""
