"""Covering-count machinery turning width bounds into entropy-number bounds.

Starting from the width bound delta_k = 2^(-kappa sqrt(k)), the count
N_i is the smallest dimension whose bound drops below e^-i; cumulating
the N_i and inverting against a ball budget of 2^n yields a bound on
the n-th entropy number that decays like exp(-c n^(1/3)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

LN2 = math.log(2.0)

# ceil((i / (kappa ln 2))^2) must not jump up a unit when the exact
# value is an integer hit by floating-point from above.
_CEIL_SNAP = 1e-9


@dataclass(frozen=True)
class EntropyCurve:
    kappa: float
    counts: tuple[int, ...]       # N_1 .. N_j
    cumulative: tuple[int, ...]   # H_1 .. H_j
    bound_points: tuple[tuple[int, float], ...]  # (n, e_n bound)


def covering_count(kappa: float, i: int) -> int:
    """Smallest k with 2^(-kappa sqrt(k)) <= e^-i, i.e. ceil((i/(kappa ln2))^2)."""
    if kappa <= 0.0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    if i < 1:
        raise ValueError(f"index must be >= 1, got {i}")
    raw = (i / (kappa * LN2)) ** 2
    nearest = round(raw)
    if abs(raw - nearest) < _CEIL_SNAP:
        return max(int(nearest), 1)
    return max(math.ceil(raw), 1)


def covering_counts(kappa: float, j_max: int) -> list[int]:
    """The counts N_1 .. N_{j_max}."""
    if j_max < 1:
        raise ValueError(f"j_max must be >= 1, got {j_max}")
    return [covering_count(kappa, i) for i in range(1, j_max + 1)]


def entropy_sum(kappa: float, j: int) -> tuple[int, float]:
    """(exact cumulative H_j, closed-form approximation).

    The closed form j(j+1)(2j+1) / (6 (kappa ln 2)^2) is the sum of the
    un-ceiled terms; per-term ceiling slack keeps the gap at most j.
    """
    counts = covering_counts(kappa, j)
    closed = j * (j + 1) * (2 * j + 1) / (6.0 * (kappa * LN2) ** 2)
    return sum(counts), closed


def entropy_bound_curve(
    kappa: float,
    n_values: Sequence[int],
    ball_convention: str = "2^n",
) -> EntropyCurve:
    """Entropy-number bounds e_n <= e^-j from the covering counts.

    For each n the budget is n ln 2 nats of covering (2^n balls; the
    "2^(n-1)" convention spends one ball fewer) and j is the largest
    level with H_j within budget; no level affordable gives the trivial
    bound 1.
    """
    if kappa <= 0.0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    if ball_convention not in ("2^n", "2^(n-1)"):
        raise ValueError(f"unknown ball convention {ball_convention!r}")
    shift = 0 if ball_convention == "2^n" else 1
    n_values = list(n_values)
    if not n_values or min(n_values) < 1:
        raise ValueError("n values must be positive integers")
    budget_max = (max(n_values) - shift) * LN2
    counts = []
    cumulative = []
    total = 0
    i = 1
    while total <= budget_max:
        c = covering_count(kappa, i)
        total += c
        counts.append(c)
        cumulative.append(total)
        i += 1
    points = []
    for n in sorted(n_values):
        budget = (n - shift) * LN2
        j = 0
        # cumulative is sorted; linear scan is fine at these sizes but
        # bisection keeps large sweeps cheap.
        lo, hi = 0, len(cumulative)
        while lo < hi:
            mid = (lo + hi) // 2
            if cumulative[mid] <= budget:
                lo = mid + 1
            else:
                hi = mid
        j = lo
        points.append((n, math.exp(-j) if j >= 1 else 1.0))
    return EntropyCurve(
        kappa=kappa,
        counts=tuple(counts),
        cumulative=tuple(cumulative),
        bound_points=tuple(points),
    )
