"""Command-line surface: closed-form checks, table reproduction, sweeps.

Subcommands: hsnorm | example | sweep | spectrum | entropy. Data files
are deterministic (17 significant digits, no timestamps); figures are
rendered next to them only when --plot is given.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 invalid decay regime.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import analysis, approximant, entropy, quadrature, reporting, specfun, spectral
from .errors import NumericalError
from .kernel import OperatorParams, TestFunction

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_REGIME = 4


class ConfigError(Exception):
    """Invalid command-line configuration."""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kwidths",
        description=(
            "Piecewise approximation of the (1-xy)^(alpha-1) integral "
            "operator: error sweeps, spectra, and entropy bounds."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", type=Path, default=Path("out"),
                       help="output directory (default: ./out)")
        p.add_argument("--format", choices=("csv", "json"), default="csv",
                       help="data file format (default: csv)")
        p.add_argument("--plot", action="store_true",
                       help="also render figures next to the data files")

    p = sub.add_parser("hsnorm", help="Hilbert-Schmidt norm cross-check")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--N", type=int, default=256, help="Nystrom grid size")

    p = sub.add_parser(
        "example",
        help="reproduce the reference construction at beta=1/2, f = v^0 (1-v)^(-1/3)",
    )
    p.add_argument("--n", type=int, required=True, help="order, 2..12")
    add_common(p)

    p = sub.add_parser("sweep", help="order sweep of the approximation error")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--alpha", type=float)
    group.add_argument("--beta", type=float)
    p.add_argument("--p", type=float, required=True, help="source space exponent")
    p.add_argument("--r", type=float, default=None, help="target norm exponent")
    p.add_argument("--f", default="1,0.6666666666666666",
                   help="test function: 'const' or 'nu,mu' (default f_{1,2/3})")
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-12, help="coefficient tolerance")
    p.add_argument("--grid", type=int, default=40, help="grid points per interval")
    add_common(p)

    p = sub.add_parser("spectrum", help="Nystrom singular values")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--N", type=int, default=512)
    p.add_argument("--grading", type=int, default=spectral.DEFAULT_GRADING)
    add_common(p)

    p = sub.add_parser("entropy", help="covering counts and entropy-number bounds")
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--n-max", type=int, default=10 ** 6)
    p.add_argument("--points", type=int, default=60, help="log-spaced n samples")
    add_common(p)

    return parser


def _parse_test_function(spec: str) -> TestFunction:
    if spec.strip() == "const":
        return TestFunction.constant()
    parts = spec.split(",")
    if len(parts) != 2:
        raise ConfigError(f"--f must be 'const' or 'nu,mu', got {spec!r}")
    try:
        nu, mu = float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise ConfigError(f"could not parse --f {spec!r}: {exc}") from exc
    if nu <= 0.0 or mu <= 0.0:
        raise ConfigError(f"--f needs nu, mu > 0, got ({nu}, {mu})")
    return TestFunction.power_pair(nu, mu)


def _write(args, path: Path, header, rows, footer=None):
    if args.format == "json":
        path = path.with_suffix(".json")
        reporting.write_json(path, header, rows, footer)
    else:
        reporting.write_csv(path, header, rows, footer)
    return path


def cmd_hsnorm(args) -> int:
    if not 0.0 < args.alpha < 1.0:
        raise ConfigError(f"--alpha must lie in (0,1), got {args.alpha}")
    closed = specfun.hs_norm_squared(args.alpha)
    quad = quadrature.integrate2d_kernel_sq(args.alpha).value
    hs_sum, _, gap = spectral.hs_check(args.alpha, args.N)
    print(f"alpha                  = {args.alpha:.17g}")
    print(f"closed form  |K|_2^2   = {closed:.17g}")
    print(f"             |K|_2     = {math.sqrt(closed):.17g}")
    print(f"2-D quadrature         = {quad:.17g}  (gap {abs(quad - closed):.3e})")
    print(f"Nystrom sum sigma^2    = {hs_sum:.17g}  (relative gap {gap:.3e})")
    return EXIT_OK


def cmd_example(args) -> int:
    if not 2 <= args.n <= approximant.MAX_ORDER:
        raise ConfigError(
            f"--n must lie in [2, {approximant.MAX_ORDER}], got {args.n}"
        )
    params = OperatorParams.from_beta(0.5)
    f = TestFunction.power_pair(1.0, 2.0 / 3.0)
    phi = approximant.build(f, params, args.n)

    rows = []
    for j, c in enumerate(phi.leftmost):
        rows.append(("leftmost", "poly", j, c))
    for piece in reversed(phi.pieces):
        for j, c in enumerate(piece.poly):
            rows.append((f"k{piece.k}", "poly", j, c))
        for j, c in enumerate(piece.singular):
            rows.append((f"k{piece.k}", "singular", j, c))
    coeff_path = _write(
        args,
        args.out / f"example_n{args.n}_coefficients.csv",
        ("interval", "block", "index", "coefficient"),
        rows,
        {"n": args.n, "beta": phi.beta, "dim": phi.dim},
    )
    reporting.write_sidecar(coeff_path, vars(args))

    ref = analysis.reference_evaluator(f, params)
    diff_rows = []
    series = []
    for label, pts in analysis.interval_grids(phi.n, 40):
        xs, ys = [], []
        for u in pts:
            d = abs(ref(float(u)) - phi(float(u)))
            diff_rows.append((label, float(u), d))
            xs.append(float(u))
            ys.append(d)
        series.append((label, xs, ys))
    diff_path = _write(
        args,
        args.out / f"example_n{args.n}_difference.csv",
        ("interval", "u", "abs_difference"),
        diff_rows,
        {"n": args.n, "beta": phi.beta},
    )
    print(f"wrote {coeff_path}")
    print(f"wrote {diff_path}")
    if args.plot:
        fig = reporting.render_loglog(
            args.out / f"example_n{args.n}_difference.png",
            series,
            xlabel="u",
            ylabel="|reference - approximant|",
            title=f"order n={args.n}, beta=1/2",
        )
        print(f"wrote {fig}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.alpha is not None:
        if not 0.0 < args.alpha < 1.0:
            raise ConfigError(f"--alpha must lie in (0,1), got {args.alpha}")
        params = OperatorParams(alpha=args.alpha)
    else:
        if not 0.0 < args.beta < 1.0:
            raise ConfigError(f"--beta must lie in (0,1), got {args.beta}")
        params = OperatorParams.from_beta(args.beta)
    if not 1 <= args.n_min < args.n_max <= approximant.MAX_ORDER:
        raise ConfigError(
            f"need 1 <= n-min < n-max <= {approximant.MAX_ORDER}, "
            f"got [{args.n_min}, {args.n_max}]"
        )
    f = _parse_test_function(args.f)
    regime = analysis.classify(params.alpha, args.p, args.r)
    if not regime.valid:
        print(f"invalid regime: {regime.reason}", file=sys.stderr)
        return EXIT_REGIME

    n_range = range(args.n_min, args.n_max + 1)
    reports = analysis.decay_sweep(
        f, params, regime, n_range,
        grid_per_interval=args.grid, build_tol=args.tol,
    )
    fit = analysis.fit_kappa([(rep.n, rep.total) for rep in reports])

    max_n = max(rep.n for rep in reports)
    header = ["n", "dim", "norm", "error_total", "err_leftmost"]
    header += [f"err_k{k}" for k in range(max_n)]
    rows = []
    for rep in reports:
        by_label = dict(rep.per_interval)
        row = [rep.n, rep.dim, rep.norm_used, rep.total, by_label["leftmost"]]
        row += [by_label.get(f"k{k}", "") for k in range(max_n)]
        rows.append(row)
    footer = {
        "regime": regime.tag,
        "theoretical_kappa_per_n": regime.theoretical_kappa_per_n,
        "kappa_hat": fit.kappa_hat,
        "r_squared": fit.r_squared,
    }
    path = _write(args, args.out / "sweep.csv", header, rows, footer)
    reporting.write_sidecar(path, vars(args))
    print(f"wrote {path}")
    print(f"regime={regime.tag} kappa_hat={fit.kappa_hat:.4f} "
          f"r_squared={fit.r_squared:.5f}")
    if args.plot:
        fig = reporting.render_semilogy(
            args.out / "sweep.png",
            [("error", [rep.n for rep in reports], [rep.total for rep in reports])],
            xlabel="order n",
            ylabel=f"error ({regime.norm_used})",
            title=f"alpha={params.alpha:g}, {regime.tag}, "
                  f"kappa_hat={fit.kappa_hat:.3f}",
        )
        print(f"wrote {fig}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    if not 0.0 < args.alpha < 1.0:
        raise ConfigError(f"--alpha must lie in (0,1), got {args.alpha}")
    report = spectral.spectral_report(args.alpha, args.N, args.grading)
    rows = []
    for m, sigma in enumerate(report.singular_values, start=1):
        ln_sigma = math.log(sigma) if sigma > 0.0 else float("-inf")
        rows.append((m, sigma, math.sqrt(m), ln_sigma))
    c_hat, r2 = spectral.sqrt_decay_fit(np.array(report.singular_values), m_max=40)
    footer = {
        "alpha": report.alpha,
        "hs_sum": report.hs_sum,
        "hs_closed_form": specfun.hs_norm_squared(args.alpha),
        "sqrt_fit_c_hat": c_hat,
        "sqrt_fit_r_squared": r2,
        "negative_eigenvalues": len(report.negative_eigenvalues),
    }
    path = _write(args, args.out / "spectrum.csv",
                  ("m", "sigma_m", "sqrt_m", "ln_sigma_m"), rows, footer)
    reporting.write_sidecar(path, vars(args))
    print(f"wrote {path}")
    print(f"hs_sum={report.hs_sum:.12g} c_hat={c_hat:.4f} r_squared={r2:.5f}")
    if args.plot:
        reliable = [(m, s) for m, s in enumerate(report.singular_values, 1)
                    if s > 1e-14][:80]
        fig = reporting.render_semilogy(
            args.out / "spectrum.png",
            [("sigma_m", [m for m, _ in reliable], [s for _, s in reliable])],
            xlabel="m",
            ylabel="sigma_m",
            title=f"alpha={args.alpha:g}, N={args.N}",
        )
        print(f"wrote {fig}")
    return EXIT_OK


def cmd_entropy(args) -> int:
    if args.kappa <= 0.0:
        raise ConfigError(f"--kappa must be positive, got {args.kappa}")
    if args.n_max < 10 or args.points < 2:
        raise ConfigError("need --n-max >= 10 and --points >= 2")
    n_values = sorted(set(
        int(round(v)) for v in np.geomspace(1, args.n_max, args.points)
    ))
    curve = entropy.entropy_bound_curve(args.kappa, n_values)
    bound_path = _write(
        args, args.out / "entropy_bounds.csv",
        ("n", "e_n_bound"),
        list(curve.bound_points),
        {"kappa": args.kappa},
    )
    counts_rows = [
        (i, n_i, h_i)
        for i, (n_i, h_i) in enumerate(zip(curve.counts, curve.cumulative), start=1)
    ]
    counts_path = _write(
        args, args.out / "entropy_counts.csv",
        ("i", "N_i", "H_i"),
        counts_rows,
        {"kappa": args.kappa},
    )
    reporting.write_sidecar(bound_path, vars(args))
    print(f"wrote {bound_path}")
    print(f"wrote {counts_path}")
    if args.plot:
        pts = [(n, b) for n, b in curve.bound_points if b < 1.0]
        fig = reporting.render_loglog(
            args.out / "entropy_bounds.png",
            [("e_n bound", [n for n, _ in pts], [b for _, b in pts])],
            xlabel="n",
            ylabel="entropy number bound",
            title=f"kappa={args.kappa:g}",
        )
        print(f"wrote {fig}")
    return EXIT_OK


_COMMANDS = {
    "hsnorm": cmd_hsnorm,
    "example": cmd_example,
    "sweep": cmd_sweep,
    "spectrum": cmd_spectrum,
    "entropy": cmd_entropy,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
