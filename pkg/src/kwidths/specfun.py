"""Double-precision special functions used throughout the package.

Everything here is implemented with stable recurrences or series; no raw
gamma-function quotients that would overflow for large indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NonConvergenceError

EULER_GAMMA = 0.5772156649015328606065121

PI_SQ_OVER_6 = math.pi ** 2 / 6.0

# Threshold below which the removable case split of the squared
# Hilbert-Schmidt norm switches to its limit value.
_HS_ALPHA_SPLIT = 1e-9


@dataclass(frozen=True)
class SeriesCoeff:
    """Taylor coefficient a_j of (1+x)^(-beta) about x = 0."""

    j: int
    value: float


def taylor_coeff(beta: float, j: int) -> float:
    """Coefficient a_j of the binomial series (1+x)^(-beta) = sum a_j x^j.

    Computed by the ratio recurrence a_0 = 1, a_j = -a_{j-1} (beta+j-1)/j,
    which stays bounded where direct gamma quotients would overflow.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0,1), got {beta}")
    if j < 0:
        raise ValueError(f"index must be nonnegative, got {j}")
    a = 1.0
    for i in range(1, j + 1):
        a = -a * (beta + i - 1.0) / i
    return a


def taylor_coeffs(beta: float, n: int) -> list[float]:
    """First n coefficients [a_0, ..., a_{n-1}] of (1+x)^(-beta)."""
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0,1), got {beta}")
    if n < 1:
        raise ValueError(f"need at least one coefficient, got n={n}")
    out = [1.0]
    for i in range(1, n):
        out.append(-out[-1] * (beta + i - 1.0) / i)
    return out


def gamma_ratio(n: int, beta: float) -> float:
    """Gamma(n+beta) / Gamma(n+1) via product recurrence from n = 1.

    Agrees with the asymptotic n^(beta-1) [1 - beta(1-beta)/(2n)] up to
    O(n^-2) relative error.
    """
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0,1), got {beta}")
    # Gamma(1+beta)/Gamma(2) = Gamma(1+beta); the argument is small so a
    # direct gamma call is safe here.
    r = math.gamma(1.0 + beta)
    for k in range(1, n):
        r *= (k + beta) / (k + 1.0)
    return r


def digamma(x: float) -> float:
    """Digamma function Psi(x) for x > 0, accurate to ~1e-13 absolute.

    Shifts the argument up with Psi(x+1) = Psi(x) + 1/x until the
    asymptotic series applies.
    """
    if x <= 0.0:
        raise ValueError(f"digamma requires x > 0, got {x}")
    shift = 0.0
    while x < 10.0:
        shift -= 1.0 / x
        x += 1.0
    # Asymptotic series: ln x - 1/(2x) - sum B_2k / (2k x^{2k}).
    inv2 = 1.0 / (x * x)
    series = (
        1.0 / 12.0
        - inv2 * (1.0 / 120.0
                  - inv2 * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0
                                      - inv2 * (1.0 / 132.0
                                                - inv2 * 691.0 / 32760.0))))
    )
    return shift + math.log(x) - 0.5 / x - inv2 * series


def dilog(z: float) -> float:
    """Dilogarithm Li_2(z) = sum_{k>=1} z^k / k^2 for z in [0, 1].

    For z > 1/2 the reflection Li_2(z) + Li_2(1-z) = pi^2/6 - ln z ln(1-z)
    keeps the series argument small.
    """
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"dilog requires z in [0,1], got {z}")
    if z == 0.0:
        return 0.0
    if z == 1.0:
        return PI_SQ_OVER_6
    if z > 0.5:
        return PI_SQ_OVER_6 - math.log(z) * math.log(1.0 - z) - dilog(1.0 - z)
    total = 0.0
    term = z
    k = 1
    while abs(term) > 1e-17 * (1.0 + abs(total)):
        total += term / (k * k)
        term *= z
        k += 1
        if k > 10_000:
            raise NonConvergenceError("dilog series did not converge")
    return total


def hyp2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric 2F1(a,b;c;z) by its defining power series.

    Valid for 0 <= z < 1 (and z = 1 when c - a - b > 0). Analytic
    continuation is deliberately out of scope; callers stay inside the
    convergent region via transformation formulae.
    """
    if c <= 0.0 and abs(c - round(c)) < 1e-12:
        raise ValueError(f"c must not be a nonpositive integer, got {c}")
    if z < 0.0 or z > 1.0:
        raise ValueError(f"series argument must lie in [0,1], got {z}")
    if z == 1.0:
        if c - a - b <= 0.0:
            raise ValueError("series diverges at z=1 unless c-a-b > 0")
        # Gauss summation; the raw series converges only algebraically here.
        return math.exp(
            math.lgamma(c) + math.lgamma(c - a - b)
            - math.lgamma(c - a) - math.lgamma(c - b)
        )
    total = 1.0
    term = 1.0
    for k in range(1_000_000):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
        if abs(term) < 1e-14 * abs(total):
            return total
    raise NonConvergenceError(
        f"2F1({a},{b};{c};{z}) did not converge within 1e6 terms"
    )


def hs_norm_squared(alpha: float) -> float:
    """Squared Hilbert-Schmidt norm of the kernel (1-xy)^(alpha-1).

    Equals pi^2/6 at alpha = 1/2 and (gamma + Psi(2 alpha)) / (2 alpha - 1)
    elsewhere; the case split is removable and continuous.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")
    if abs(alpha - 0.5) < _HS_ALPHA_SPLIT:
        return PI_SQ_OVER_6
    return (EULER_GAMMA + digamma(2.0 * alpha)) / (2.0 * alpha - 1.0)
