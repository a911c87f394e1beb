"""The integral operator in transformed coordinates.

The kernel (1-xy)^(alpha-1) becomes (u+v-uv)^(-beta) under u = 1-x,
v = 1-y with beta = 1-alpha; all approximation work happens in these
coordinates with the relabeled input g(z) = f(1-z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from . import quadrature, specfun
from .quadrature import SingularityHint


@dataclass(frozen=True)
class OperatorParams:
    """Single kernel parameter alpha in (0,1); beta = 1 - alpha stored."""

    alpha: float
    beta: float = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0,1), got {self.alpha}")
        object.__setattr__(self, "beta", 1.0 - self.alpha)

    @classmethod
    def from_beta(cls, beta: float) -> "OperatorParams":
        if not 0.0 < beta < 1.0:
            raise ValueError(f"beta must lie in (0,1), got {beta}")
        return cls(alpha=1.0 - beta)


@dataclass(frozen=True)
class TestFunction:
    """Input function in transformed coordinates.

    ``evaluator`` is g(v) = f(1-v) on (0,1); ``left_exponent`` and
    ``right_exponent`` give its algebraic order at v = 0 and v = 1 so
    quadrature can place singularity hints. Evaluators must be pure.
    """

    __test__ = False  # not a test case despite the class name

    kind: str  # "constant" | "power_pair" | "custom"
    evaluator: Callable[[float], float]
    left_exponent: float = 0.0
    right_exponent: float = 0.0
    nu: float | None = None
    mu: float | None = None
    lp_membership: str = ""

    def __post_init__(self):
        if self.left_exponent <= -1.0 or self.right_exponent <= -1.0:
            raise ValueError("endpoint exponents must be > -1 for L^1 membership")

    @classmethod
    def constant(cls, value: float = 1.0) -> "TestFunction":
        return cls(
            kind="constant",
            evaluator=lambda v: value,
            lp_membership="L^p for every p (bounded)",
        )

    @classmethod
    def power_pair(cls, nu: float, mu: float) -> "TestFunction":
        """g(v) = v^(nu-1) (1-v)^(mu-1); requires nu, mu > 0."""
        if nu <= 0.0 or mu <= 0.0:
            raise ValueError(
                f"power pair needs nu, mu > 0 for integrability, got ({nu}, {mu})"
            )
        membership = f"L^p for p < {_lp_limit(nu, mu)}"
        return cls(
            kind="power_pair",
            evaluator=lambda v: v ** (nu - 1.0) * (1.0 - v) ** (mu - 1.0),
            left_exponent=nu - 1.0,
            right_exponent=mu - 1.0,
            nu=nu,
            mu=mu,
            lp_membership=membership,
        )

    @classmethod
    def custom(
        cls,
        evaluator: Callable[[float], float],
        left_exponent: float = 0.0,
        right_exponent: float = 0.0,
        lp_membership: str = "",
    ) -> "TestFunction":
        return cls("custom", evaluator, left_exponent, right_exponent,
                   lp_membership=lp_membership)


def _lp_limit(nu: float, mu: float) -> float:
    worst = min(nu - 1.0, mu - 1.0)
    if worst >= 0.0:
        return math.inf
    return 1.0 / (-worst)


def kernel_tilde(u: float, v: float, params: OperatorParams) -> float:
    """Transformed kernel (u + v - uv)^(-beta), singular only at (0,0)."""
    if u == 0.0 and v == 0.0:
        raise ValueError("kernel is singular at (u,v) = (0,0)")
    return (u + v - u * v) ** (-params.beta)


def _hints(f: TestFunction) -> tuple[SingularityHint, ...]:
    hints = []
    if f.left_exponent < 0.0:
        hints.append(SingularityHint("left", f.left_exponent))
    if f.right_exponent < 0.0:
        hints.append(SingularityHint("right", f.right_exponent))
    return tuple(hints)


def apply_reference(
    f: TestFunction,
    u: float,
    params: OperatorParams,
    tol: float = 1e-10,
) -> float:
    """Transformed operator applied to f at u, by adaptive quadrature.

    This is the ground-truth evaluation all error measurements compare
    against; needs u > 0 (at u = 0 the integral may diverge).
    """
    if not 0.0 < u <= 1.0:
        raise ValueError(f"u must lie in (0,1], got {u}")
    beta = params.beta

    def integrand(v: float) -> float:
        return f.evaluator(v) * (u + v - u * v) ** (-beta)

    return quadrature.integrate(integrand, 0.0, 1.0, hint=_hints(f), tol=tol).value


def _gamma(x: float) -> float:
    """Gamma with a guard against nonpositive-integer poles."""
    if x <= 0.0 and abs(x - round(x)) < 1e-9:
        raise ValueError(f"gamma pole at {x}; perturb the parameters")
    return math.gamma(x)


def closed_form_power_pair(u: float, beta: float, nu: float, mu: float) -> float:
    """Transformed operator applied to the power pair g(v)=v^(nu-1)(1-v)^(mu-1).

    Hypergeometric closed form, evaluated on two series branches so every
    2F1 call stays well inside its convergence disk: a series in u for
    u <= 1/2 and a series in 1-u for u > 1/2. At u = 0 the value is the
    finite limit when nu > beta and +inf otherwise.

    Parameter sets with nu - beta at an integer hit gamma poles of the
    small-u connection formula and are rejected.
    """
    if nu <= 0.0 or mu <= 0.0:
        raise ValueError(f"need nu, mu > 0, got ({nu}, {mu})")
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0,1), got {beta}")
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"u must lie in [0,1], got {u}")
    if u == 1.0:
        return quadrature.beta_function(mu, nu)
    if u > 0.5:
        return quadrature.beta_function(mu, nu) * specfun.hyp2f1(
            beta, mu, mu + nu, 1.0 - u
        )
    if abs((nu - beta) - round(nu - beta)) < 1e-9:
        raise ValueError(
            f"nu - beta = {nu - beta} is (near) an integer; the series-in-u "
            "connection formula degenerates for these parameters"
        )
    lead = _gamma(mu) * _gamma(nu - beta) / _gamma(mu + nu - beta)
    if u == 0.0:
        return lead if nu > beta else math.inf
    term1 = lead * specfun.hyp2f1(beta, mu, beta - nu + 1.0, u)
    term2 = (
        u ** (nu - beta)
        * _gamma(nu) * _gamma(beta - nu) / _gamma(beta)
        * specfun.hyp2f1(nu, mu + nu - beta, nu - beta + 1.0, u)
    )
    return term1 + term2


def op_norm_row_integral(x: float, alpha: float) -> float:
    """Row integral of the original kernel: int_0^1 (1-xy)^(alpha-1) dy.

    Continuous on [0,1], increasing, and bounded by 1/alpha (the Schur
    bound on the operator norm).
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0,1], got {x}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")
    if x == 0.0:
        return 1.0
    return (1.0 - (1.0 - x) ** alpha) / (alpha * x)
