"""Piecewise-smooth approximation of the transformed operator output.

For order n the unit interval is partitioned into the dyadic intervals
(2^-(k+1), 2^-k], k = 0..n-1, plus the leftmost [0, 2^-n]. Each dyadic
piece carries a degree-(n-1) polynomial together with n singular terms
u^(-beta-i); the leftmost piece carries a polynomial alone. The total
subspace dimension is 2n^2 + n.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

from . import quadrature, specfun
from .kernel import OperatorParams, TestFunction
from .quadrature import SingularityHint

# Beyond this order the monomial recombination of the local Taylor
# polynomials loses too many digits to cancellation.
MAX_ORDER = 12

# The leftmost polynomial approximates the tail integral over
# [2^-(n+offset), 1]. Offset +1 matches the reference coefficient table
# (and keeps the dropped head integral small); offset -1 is the
# conservative variant for which the Taylor remainder bound is uniform.
DEFAULT_TAIL_CUT_OFFSET = 1
COEFF_MAGNITUDE_CAP = 1e300


@dataclass(frozen=True)
class IntervalPiece:
    """Coefficients on the dyadic interval (2^-(k+1), 2^-k]."""

    k: int
    poly: tuple[float, ...]      # a_0 + a_1 u + ... + a_{n-1} u^{n-1}
    singular: tuple[float, ...]  # b_0 u^-beta + ... + b_{n-1} u^{-beta-n+1}

    def __post_init__(self):
        if len(self.poly) != len(self.singular):
            raise ValueError("polynomial and singular blocks must match in length")


@dataclass(frozen=True)
class PiecewiseApproximant:
    n: int
    beta: float
    leftmost: tuple[float, ...]
    pieces: tuple[IntervalPiece, ...]
    taylor_centers: tuple[float, ...]

    @property
    def dim(self) -> int:
        return dimension(self.n)

    def __call__(self, u: float) -> float:
        return evaluate(self, u)

    def to_json(self) -> str:
        doc = {
            "n": self.n,
            "beta": self.beta,
            "leftmost": list(self.leftmost),
            "pieces": [
                {"k": p.k, "poly": list(p.poly), "singular": list(p.singular)}
                for p in self.pieces
            ],
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "PiecewiseApproximant":
        doc = json.loads(text)
        n = doc["n"]
        return cls(
            n=n,
            beta=doc["beta"],
            leftmost=tuple(doc["leftmost"]),
            pieces=tuple(
                IntervalPiece(p["k"], tuple(p["poly"]), tuple(p["singular"]))
                for p in doc["pieces"]
            ),
            taylor_centers=tuple(taylor_center(k) for k in range(n)),
        )


def dimension(n: int) -> int:
    """Dimension 2n^2 + n of the order-n approximation subspace."""
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    return 2 * n * n + n


def n_from_dim(m: int) -> int:
    """Largest order n with dimension(n) <= m."""
    if m < 3:
        raise ValueError(f"dimension must be >= 3 (= dimension(1)), got {m}")
    n = int((math.sqrt(8.0 * m + 1.0) - 1.0) / 4.0)
    # Guard against floating-point under/overshoot at exact dimensions.
    while dimension(n + 1) <= m:
        n += 1
    while n > 1 and dimension(n) > m:
        n -= 1
    return n


def taylor_center(k: int) -> float:
    """Expansion point u_k = 3 * 2^-(k+2) inside the k-th dyadic interval."""
    return 3.0 * 2.0 ** (-(k + 2))


def second_integral_bounds(k: int) -> tuple[float, float]:
    """Integration range of the locally-expanded middle term for piece k."""
    return 2.0 ** (-(k + 2)), min(2.0 ** (-(k - 1)), 1.0)


def _falling_beta_product(beta: float, m: int) -> float:
    """beta (beta+1) ... (beta+m-1), i.e. Gamma(beta+m)/Gamma(beta)."""
    out = 1.0
    for i in range(m):
        out *= beta + i
    return out


def _tail_poly_coeffs(
    f: TestFunction,
    beta: float,
    lo: float,
    coeffs: Sequence[float],
    tol: float,
) -> list[float]:
    """Polynomial block for the tail integral over [lo, 1].

    c_j = a_j * int_lo^1 g(v) v^-beta (1/v - 1)^j dv, from the binomial
    expansion of [1 + u(1/v - 1)]^-beta. Empty range yields all zeros.
    """
    n = len(coeffs)
    if lo >= 1.0:
        return [0.0] * n
    out = []
    for j, a_j in enumerate(coeffs):
        # (1/v-1)^j vanishes at v=1 to order j, softening g's singularity;
        # fractional exponents still benefit from the smoothing substitution.
        exp_right = f.right_exponent + j
        fractional = abs(exp_right - round(exp_right)) > 1e-12
        hint = (
            SingularityHint("right", exp_right)
            if (exp_right < 0.0 or fractional)
            else None
        )

        def integrand(v, _j=j):
            return f.evaluator(v) * v ** (-beta) * (1.0 / v - 1.0) ** _j

        out.append(a_j * quadrature.integrate(integrand, lo, 1.0, hint, tol).value)
    return out


def _head_moments(f: TestFunction, hi: float, n: int, tol: float) -> list[float]:
    """Moments M_j = int_0^hi g(v) v^j dv, j = 0..n-1."""
    out = []
    for j in range(n):
        exp_left = f.left_exponent + j
        hint = SingularityHint("left", exp_left) if exp_left < 0.0 else None

        def integrand(v, _j=j):
            return f.evaluator(v) * v ** _j

        out.append(quadrature.integrate(integrand, 0.0, hi, hint, tol).value)
    return out


def fderiv(
    f: TestFunction,
    params: OperatorParams,
    k: int,
    m: int,
    u: float | None = None,
    tol: float = 1e-12,
) -> float:
    """m-th derivative (in u) of the middle-term integral of piece k.

    F(u) = int g(v) (u+v-uv)^-beta dv over the piece's middle range; its
    derivatives pick up (-1)^m beta(beta+1)...(beta+m-1) (1-v)^m and the
    kernel power drops by m. Evaluated at the Taylor center by default.
    """
    if m < 0:
        raise ValueError(f"derivative order must be >= 0, got {m}")
    beta = params.beta
    lo, hi = second_integral_bounds(k)
    if u is None:
        u = taylor_center(k)
    factor = (-1.0) ** m * _falling_beta_product(beta, m)

    def integrand(v):
        return (
            f.evaluator(v)
            * (1.0 - v) ** m
            * (u + v - u * v) ** (-(beta + m))
        )

    exp_right = f.right_exponent + m
    hint = (
        SingularityHint("right", exp_right)
        if hi == 1.0 and exp_right < 0.0
        else None
    )
    return factor * quadrature.integrate(integrand, lo, hi, hint, tol).value


def second_integral_value(
    f: TestFunction,
    params: OperatorParams,
    k: int,
    u: float,
    tol: float = 1e-12,
) -> float:
    """Middle-term integral F(u) of piece k, exactly (by quadrature)."""
    return fderiv(f, params, k, 0, u=u, tol=tol)


def build(
    f: TestFunction,
    params: OperatorParams,
    n: int,
    tol: float = 1e-12,
    tail_cut_offset: int = DEFAULT_TAIL_CUT_OFFSET,
    max_order: int = MAX_ORDER,
) -> PiecewiseApproximant:
    """Construct the order-n piecewise approximant of the operator output.

    Per dyadic piece k the three contributions are: the head integral over
    [0, 2^-(k+2)] expanded into singular powers u^(-beta-i); the middle
    integral Taylor-expanded around u_k into the polynomial block; and
    (for k >= 2) the tail integral over [2^-(k-1), 1] expanded into the
    polynomial block. The leftmost piece keeps only the tail polynomial
    over [2^-(n+tail_cut_offset), 1].
    """
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if n > max_order:
        raise ValueError(
            f"order {n} exceeds the conditioning limit {max_order}; "
            "raise max_order explicitly to override"
        )
    beta = params.beta
    a = specfun.taylor_coeffs(beta, n)

    leftmost_lo = 2.0 ** (-(n + tail_cut_offset))
    leftmost = tuple(_tail_poly_coeffs(f, beta, leftmost_lo, a, tol))

    pieces = []
    for k in range(n):
        # Head integral -> singular block.
        moments = _head_moments(f, 2.0 ** (-(k + 2)), n, tol)
        singular = [0.0] * n
        for i in range(n):
            acc = 0.0
            for j in range(i, n):
                acc += a[j] * math.comb(j, i) * (-1.0) ** (j - i) * moments[j]
            singular[i] = acc
            if abs(acc) * 2.0 ** ((k + 1) * (beta + i)) > COEFF_MAGNITUDE_CAP:
                raise OverflowError(
                    f"singular coefficient b_{i} on piece {k} is ill-conditioned"
                )

        # Middle integral -> Taylor polynomial at u_k, recombined into monomials.
        u_k = taylor_center(k)
        poly = [0.0] * n
        for m in range(n):
            t_m = fderiv(f, params, k, m, tol=tol) / math.factorial(m)
            for i in range(m + 1):
                poly[i] += t_m * math.comb(m, i) * (-u_k) ** (m - i)

        # Tail integral (empty for k < 2) -> polynomial block.
        if k >= 2:
            tail = _tail_poly_coeffs(f, beta, 2.0 ** (-(k - 1)), a, tol)
            for i in range(n):
                poly[i] += tail[i]

        pieces.append(IntervalPiece(k=k, poly=tuple(poly), singular=tuple(singular)))

    return PiecewiseApproximant(
        n=n,
        beta=beta,
        leftmost=leftmost,
        pieces=tuple(pieces),
        taylor_centers=tuple(taylor_center(k) for k in range(n)),
    )


def piece_index(n: int, u: float) -> int | None:
    """Piece for u: None for the leftmost interval, else the dyadic k.

    Intervals are right-closed, so u = 2^-k belongs to piece k and u = 1
    to piece 0.
    """
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"u must lie in [0,1], got {u}")
    if u <= 2.0 ** (-n):
        return None
    k = int(math.floor(-math.log2(u)))
    # Fix up boundary rounding: need 2^-(k+1) < u <= 2^-k.
    while u > 2.0 ** (-k):
        k -= 1
    while u <= 2.0 ** (-(k + 1)):
        k += 1
    return min(max(k, 0), n - 1)


def _horner(coeffs: Sequence[float], x: float) -> float:
    out = 0.0
    for c in reversed(coeffs):
        out = out * x + c
    return out


def evaluate(phi: PiecewiseApproximant, u: float) -> float:
    """Evaluate the approximant; u = 0 is allowed only on the leftmost piece."""
    k = piece_index(phi.n, u)
    if k is None:
        return _horner(phi.leftmost, u)
    piece = phi.pieces[k]
    w = 1.0 / u
    return _horner(piece.poly, u) + u ** (-phi.beta) * _horner(piece.singular, w)
