"""Piecewise approximation and spectral analysis of the operator
(K f)(x) = integral of (1-xy)^(alpha-1) f(y) dy over [0,1].

Submodules: specfun (special functions), quadrature (adaptive
integration), kernel (operator and test functions), approximant (the
piecewise construction), analysis (error sweeps and decay fits),
spectral (Nystrom discretization), entropy (covering counts), cli.
"""

from .reporting import __version__
from .errors import NumericalError, NonConvergenceError, QuadratureError
from .kernel import OperatorParams, TestFunction
from .approximant import PiecewiseApproximant, build, dimension, n_from_dim

__all__ = [
    "__version__",
    "NumericalError",
    "NonConvergenceError",
    "QuadratureError",
    "OperatorParams",
    "TestFunction",
    "PiecewiseApproximant",
    "build",
    "dimension",
    "n_from_dim",
]
