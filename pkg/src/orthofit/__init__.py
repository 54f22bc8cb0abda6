"""Least squares by Gram-Schmidt orthogonal projection.

The fitted vector is the orthogonal projection of the response onto the
column space of the design matrix, so no pseudo-inverse is formed.
"""

from ._backend import BACKEND
from .core import DesignMatrix, axpy, column, inner_product, norm, vector, with_intercept
from .errors import (
    DegeneracyError,
    DegenerateRegressorError,
    DimensionError,
    NonFiniteError,
    OrthofitError,
    SingularSystemError,
    SolverDiscrepancyError,
)
from .orthogonalize import OrthonormalBasis, centered_second_vector, gram_schmidt
from .regress import (
    FitResult,
    Method,
    SimpleRegressionData,
    fit_normal_equations,
    fit_projection,
    fit_simple_closed_form,
    project,
    residual_diagnostics,
)
from .simulate import (
    BenchmarkReport,
    ConfigError,
    SimConfig,
    SimReport,
    XSpec,
    benchmark,
    generate_trial,
    run_simulation,
)

__version__ = "0.1.0"
