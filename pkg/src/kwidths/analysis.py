"""Error measurement, decay-regime classification, and exponent fitting.

The approximation error of the piecewise construction is measured either
in the sup norm or in L^r depending on the regime the parameters
(alpha, p, r) fall into; sweeping the order n and fitting log2(error)
against n estimates the decay exponent kappa.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import approximant, quadrature
from .kernel import OperatorParams, TestFunction, apply_reference, closed_form_power_pair

DEFAULT_GRID_PER_INTERVAL = 40

# The sup on the leftmost interval is sampled down to 2^-(n+8), not to
# zero: the bound there is uniform but the reference evaluation degrades
# as u -> 0, and eight extra octaves probe the region thoroughly.
LEFTMOST_EXTRA_OCTAVES = 8


@dataclass(frozen=True)
class RegimeCase:
    """One of the three decay regimes, or Invalid with a reason.

    ``theoretical_kappa_per_n`` is the per-order exponent (the bound on
    the decay of the order-n error before converting order to subspace
    dimension); ``norm_used`` is "Linf" or "L{r}".
    """

    tag: str  # "SupCase" | "Critical" | "SubCritical" | "Invalid"
    theoretical_kappa_per_n: float
    norm_used: str
    reason: str = ""

    @property
    def valid(self) -> bool:
        return self.tag != "Invalid"


@dataclass(frozen=True)
class ErrorReport:
    n: int
    dim: int
    per_interval: tuple[tuple[str, float], ...]
    total: float
    norm_used: str


@dataclass(frozen=True)
class DecayFit:
    kappa_hat: float
    intercept: float
    r_squared: float
    n_range: tuple[int, int]


def _invalid(reason: str) -> RegimeCase:
    return RegimeCase("Invalid", float("nan"), "", reason)


def classify(alpha: float, p: float, r: float | None = None) -> RegimeCase:
    """Assign (alpha, p, r) to its decay regime.

    With q the conjugate exponent of p: q beta < 1 gives the sup-norm
    regime with exponent alpha - 1/p; q beta = 1 the critical regime
    measured in L^r with exponent min(1/r, 1); q beta > 1 the
    subcritical regime, valid only when 1 - 1/r < alpha and r beta < 1,
    with exponent 1 - 1/p. Anything else is Invalid (a value, not an
    exception).
    """
    if not 0.0 < alpha < 1.0:
        return _invalid(f"alpha must lie in (0,1), got {alpha}")
    if p < 1.0:
        return _invalid(f"p must be >= 1, got {p}")
    beta = 1.0 - alpha
    inv_p = 1.0 / p if math.isfinite(p) else 0.0
    if alpha > inv_p + 1e-12:
        return RegimeCase("SupCase", alpha - inv_p, "Linf")
    if abs(alpha - inv_p) <= 1e-12:
        if r is None or not math.isfinite(r) or r < 1.0:
            return _invalid("critical regime needs a finite r >= 1")
        return RegimeCase("Critical", min(1.0 / r, 1.0), f"L{r:g}")
    # alpha < 1/p from here on.
    if r is None or not math.isfinite(r) or r < 1.0:
        return _invalid("subcritical regime needs a finite r >= 1")
    if alpha <= 1.0 - 1.0 / r:
        return _invalid(
            f"subcritical regime needs alpha > 1 - 1/r = {1.0 - 1.0 / r:g}"
        )
    if r * beta >= 1.0:
        return _invalid(f"subcritical regime needs r beta < 1, got {r * beta:g}")
    return RegimeCase("SubCritical", 1.0 - inv_p, f"L{r:g}")


def reference_evaluator(
    f: TestFunction,
    params: OperatorParams,
    tol: float = 1e-10,
) -> Callable[[float], float]:
    """Ground-truth evaluator u -> (transformed operator f)(u).

    Power pairs with usable parameters go through the hypergeometric
    closed form (fast, ~1e-13 accurate); everything else falls back to
    adaptive quadrature.
    """
    if f.kind == "power_pair":
        nu, mu, beta = f.nu, f.mu, params.beta
        # The small-u branch degenerates when nu - beta is an integer.
        if abs((nu - beta) - round(nu - beta)) > 1e-9:
            return lambda u: closed_form_power_pair(u, beta, nu, mu)
    return lambda u: apply_reference(f, u, params, tol=tol)


def interval_grids(n: int, grid_per_interval: int) -> list[tuple[str, np.ndarray]]:
    grids = []
    lo = 2.0 ** (-(n + LEFTMOST_EXTRA_OCTAVES))
    pts = np.geomspace(lo, 2.0 ** (-n), grid_per_interval * LEFTMOST_EXTRA_OCTAVES)
    grids.append(("leftmost", pts))
    for k in range(n - 1, -1, -1):
        pts = np.geomspace(2.0 ** (-(k + 1)), 2.0 ** (-k), grid_per_interval + 1)[1:]
        grids.append((f"k{k}", pts))
    return grids


def sup_error(
    f: TestFunction,
    phi: approximant.PiecewiseApproximant,
    params: OperatorParams,
    grid_per_interval: int = DEFAULT_GRID_PER_INTERVAL,
    reference: Callable[[float], float] | None = None,
) -> ErrorReport:
    """Sup-norm error of phi on a log-uniform grid, reported per interval."""
    if grid_per_interval < 2:
        raise ValueError(f"need at least 2 grid points, got {grid_per_interval}")
    ref = reference if reference is not None else reference_evaluator(f, params)
    per = []
    for label, pts in interval_grids(phi.n, grid_per_interval):
        per.append((label, max(abs(ref(u) - phi(u)) for u in pts)))
    return ErrorReport(
        n=phi.n,
        dim=phi.dim,
        per_interval=tuple(per),
        total=max(e for _, e in per),
        norm_used="Linf",
    )


def lr_error(
    f: TestFunction,
    phi: approximant.PiecewiseApproximant,
    params: OperatorParams,
    r: float,
    tol: float = 1e-9,
    reference: Callable[[float], float] | None = None,
    regime: RegimeCase | None = None,
) -> ErrorReport:
    """L^r error of phi: the r-th root of the summed per-interval integrals.

    In the subcritical regime the error behaves like u^-beta near zero,
    so r beta >= 1 would make |error|^r non-integrable; when the caller
    supplies the regime that combination is rejected up front.
    """
    if r < 1.0:
        raise ValueError(f"r must be >= 1, got {r}")
    if regime is not None and regime.tag == "SubCritical" and r * params.beta >= 1.0:
        raise ValueError(
            f"r beta = {r * params.beta:g} >= 1: |error|^r is "
            "non-integrable near u = 0 in the subcritical regime"
        )
    ref = reference if reference is not None else reference_evaluator(f, params)
    n = phi.n
    cuts = [0.0, 2.0 ** (-n)] + [2.0 ** (-k) for k in range(n - 1, -1, -1)]
    labels = ["leftmost"] + [f"k{k}" for k in range(n - 1, -1, -1)]
    per = []
    for label, lo, hi in zip(labels, cuts[:-1], cuts[1:]):
        def integrand(u):
            return abs(ref(u) - phi(u)) ** r

        hint = None
        if label == "leftmost" and f.kind == "power_pair" and f.nu < params.beta:
            # The reference behaves like u^(nu-beta) near zero.
            hint = quadrature.SingularityHint("left", r * (f.nu - params.beta))
        per.append((label, quadrature.integrate(integrand, lo, hi, hint, tol).value))
    total = sum(max(v, 0.0) for _, v in per) ** (1.0 / r)
    return ErrorReport(
        n=n,
        dim=phi.dim,
        per_interval=tuple(per),
        total=total,
        norm_used=f"L{r:g}",
    )


def decay_sweep(
    f: TestFunction,
    params: OperatorParams,
    regime: RegimeCase,
    n_range: Sequence[int],
    grid_per_interval: int = DEFAULT_GRID_PER_INTERVAL,
    build_tol: float = 1e-12,
    tail_cut_offset: int = -1,
) -> list[ErrorReport]:
    """Build phi_n and measure the regime's norm for each n in n_range.

    The sweep defaults to the conservative leftmost cut (offset -1,
    integration from 2^-(n-1)): with the reference-table cut (+1) the
    truncated binomial series is evaluated outside its convergence
    region on part of the leftmost interval and the error stops
    decaying around n = 8.
    """
    if not regime.valid:
        raise ValueError(f"cannot sweep an invalid regime: {regime.reason}")
    ref = reference_evaluator(f, params)
    reports = []
    for n in n_range:
        phi = approximant.build(
            f, params, n, tol=build_tol, tail_cut_offset=tail_cut_offset
        )
        if regime.norm_used == "Linf":
            rep = sup_error(f, phi, params, grid_per_interval, reference=ref)
        else:
            r = float(regime.norm_used[1:])
            rep = lr_error(f, phi, params, r, reference=ref, regime=regime)
        reports.append(rep)
    return reports


def fit_kappa(sweep: Sequence[tuple[int, float]]) -> DecayFit:
    """Least-squares fit of log2(error) = intercept - kappa_hat * n."""
    if len(sweep) < 3:
        raise ValueError(f"need at least 3 sweep points, got {len(sweep)}")
    ns = np.array([float(n) for n, _ in sweep])
    errs = np.array([e for _, e in sweep])
    if np.any(errs <= 0.0):
        raise ValueError("all errors must be positive for a log fit")
    if np.ptp(ns) == 0.0:
        raise ValueError("degenerate fit: zero variance in n")
    ys = np.log2(errs)
    slope, intercept = np.polyfit(ns, ys, 1)
    pred = slope * ns + intercept
    ss_res = float(np.sum((ys - pred) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return DecayFit(
        kappa_hat=-float(slope),
        intercept=float(intercept),
        r_squared=max(min(r2, 1.0), 0.0),
        n_range=(int(ns.min()), int(ns.max())),
    )


def width_bound_curve(
    kappa: float,
    m_range: Sequence[int],
) -> list[tuple[int, float]]:
    """Theoretical width bound 2^(-kappa n(m)) as a function of dimension m.

    Inverting m = 2n^2 + n gives n = (sqrt(8m+1) - 1)/4, so the bound at
    a general dimension is 2^(-kappa (sqrt(8m+1)-1)/4); at m exactly of
    the form 2n^2+n this is 2^(-kappa n).
    """
    if kappa <= 0.0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    out = []
    for m in m_range:
        if m < 1:
            raise ValueError(f"dimension must be >= 1, got {m}")
        n_real = (math.sqrt(8.0 * m + 1.0) - 1.0) / 4.0
        out.append((m, 2.0 ** (-kappa * n_real)))
    return out
