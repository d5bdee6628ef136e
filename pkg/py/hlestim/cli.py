"""Command-line entry point.

    hlestim qae-mse        MSE-vs-θ curves of amplitude estimation (uniform, sine, optimal probes)
    hlestim probe-failure  single-shot phase-estimation failure curves of the probe families
    hlestim complexity     total oracle queries of one method at one (N, η, k, ε)
    hlestim sweep          all methods along ε or N (FeMo-cofactor or Hubbard filling)
    hlestim hs-degree      Hamiltonian-simulation polynomial degree
    hlestim oracle         brute-force checks: fermion-norm, identity, bernstein

Data goes to stdout (or --out); logs go to stderr.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from typing import Callable, List, Optional, Sequence

import numpy as np

from . import __version__
from .complexity import (
    DELTA_PRIME, SWEEP_COLUMNS, ComplexityParams, Method, WyyParams, complexity_sweep, run_method, scaling,
)
from .config import EIGENSOLVERS, load_config
from .errors import ConfigError, HlestimError
from .export import write_csv, write_json, write_text
from .fermion import bernstein_threshold, coefficient_norm_samples, identity_check, sector_norm_report
from .hsdeg import hs_degree
from .log import setup_logging
from .probe import GRID_FAMILIES, ProbeFamily, make_probe, probe_variance
from .qae import (
    DEFAULT_THETA_HI, DEFAULT_THETA_LO, HALF_PI, compare_sweep, expectation_mse, max_mse,
)
from .qpe import failure_curve, kaiser_scan, max_failure

log = logging.getLogger(__name__)

FEMO_N = 152
FEMO_ETA = 113
DEFAULT_KAISER_ALPHA = 0.98


# -----------------------
# Range-checked argument types
# -----------------------

def _ranged(cast: Callable, check: Callable, what: str) -> Callable[[str], object]:
    def parse(text: str):
        try:
            value = cast(text)
        except (TypeError, ValueError):
            raise argparse.ArgumentTypeError(f"expected {what} (got {text!r})") from None
        if not check(value):
            raise argparse.ArgumentTypeError(f"expected {what} (got {text!r})")
        return value
    parse.__name__ = what
    return parse


def _finite(x: float) -> bool:
    return math.isfinite(x)


pos_int = _ranged(int, lambda v: v >= 1, "a positive integer")
nonneg_int = _ranged(int, lambda v: v >= 0, "a nonnegative integer")
unit_open = _ranged(float, lambda v: _finite(v) and 0.0 < v < 1.0, "a number in (0, 1)")
pos_real = _ranged(float, lambda v: _finite(v) and v > 0.0, "a positive number")
nonneg_real = _ranged(float, lambda v: _finite(v) and v >= 0.0, "a nonnegative number")
half_open = _ranged(float, lambda v: _finite(v) and 0.0 < v < 0.5, "a number in (0, 1/2)")
theta_value = _ranged(float, lambda v: _finite(v) and 0.0 <= v <= HALF_PI, "an angle in [0, pi/2]")
qae_q = _ranged(int, lambda v: 3 <= v <= 12, "an integer q in [3, 12]")
grid_p = _ranged(int, lambda v: 1 <= v <= 12, "an integer p in [1, 12]")
grid_size = _ranged(int, lambda v: v >= 2, "an integer >= 2")
trial_count = _ranged(int, lambda v: v >= 100, "an integer >= 100")


def _alpha_list(text: str) -> List[float]:
    try:
        values = [float(a) for a in text.split(",") if a.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers (got {text!r})") from None
    if not values or any(not _finite(a) or a < 0 for a in values):
        raise argparse.ArgumentTypeError(f"expected nonnegative alphas (got {text!r})")
    return values


# -----------------------
# Subcommands
# -----------------------

def cmd_qae_mse(args: argparse.Namespace) -> int:
    lo, hi = (0.0, HALF_PI) if args.full_range else (args.theta_lo, args.theta_hi)
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"--theta-lo must be below --theta-hi (got {lo}, {hi})")
    points = args.points or load_config().qae_points
    factor = 4.0 if args.expectation else 1.0

    if args.compare:
        table = compare_sweep(args.q, points, lo, hi, solver=args.solver, workers=args.workers)
        keys = ("mse_sine", "mse_uniform", "mse_optimal")
        if args.json:
            best = {k: int(np.argmax(table[k])) for k in keys}
            write_json({"q": args.q, "points": points, "expectation": args.expectation,
                        **{k: {"max": factor * table[k][i], "argmax": table["theta"][i]} for k, i in best.items()}},
                       args.out)
        else:
            rows = zip(table["theta"], *(factor * table[k] for k in keys))
            write_csv(("theta",) + keys, rows, args.out)
        return 0

    family = ProbeFamily.SINE_QAE if args.probe == "sine" else ProbeFamily.UNIFORM
    sweep = max_mse(make_probe(family, args.q), args.q, points, lo, hi)
    curve = expectation_mse(sweep.curve) if args.expectation else sweep.curve
    if args.json:
        write_json({"q": args.q, "probe": args.probe, "points": points, "expectation": args.expectation,
                    "max": factor * sweep.max, "argmax": sweep.argmax}, args.out)
    else:
        write_csv(("theta", "mse"), zip(sweep.thetas, curve), args.out)
    return 0


def _families(args: argparse.Namespace) -> List[ProbeFamily]:
    if args.family == "all":
        return list(GRID_FAMILIES)
    return [ProbeFamily(args.family)]


def cmd_probe_failure(args: argparse.Namespace) -> int:
    grid = args.grid or load_config().qpe_points
    if args.scan_alpha:
        scan = kaiser_scan(args.p, args.scan_alpha, grid, args.workers)
        if args.json:
            write_json([{"alpha": a, "max": m} for a, m in scan], args.out)
        else:
            write_csv(("alpha", "max_failure"), scan, args.out)
        return 0

    states = []
    for family in _families(args):
        alpha = (args.alpha if args.alpha is not None else DEFAULT_KAISER_ALPHA) \
            if family is ProbeFamily.KAISER else None
        states.append(make_probe(family, args.p, alpha))

    if args.json:
        report = {}
        for s in states:
            summary = max_failure(s, grid, args.workers)
            report[s.label] = {"max": summary.max, "argmax": summary.argmax,
                               "variance": probe_variance(s)}
        write_json({"p": args.p, "grid": grid, "families": report}, args.out)
        return 0

    thetas = np.arange(grid) / grid
    thetas = thetas[thetas <= 0.5]
    curves = [failure_curve(s, thetas, args.workers) for s in states]
    header = ("theta", "failure_prob") if len(states) == 1 else ("theta",) + tuple(s.label for s in states)
    write_csv(header, zip(thetas, *curves), args.out)
    return 0


def _wyy(args: argparse.Namespace) -> WyyParams:
    defaults = WyyParams()
    return WyyParams(
        variance=args.wyy_variance if args.wyy_variance is not None else defaults.variance,
        mu=args.wyy_mu if args.wyy_mu is not None else defaults.mu,
        delta_prime=args.wyy_delta_prime if args.wyy_delta_prime is not None else defaults.delta_prime,
    )


def cmd_complexity(args: argparse.Namespace) -> int:
    params = ComplexityParams(args.N, args.eta, args.k, args.eps, Method(args.method))
    total, trace = run_method(params, _wyy(args))
    if args.json or args.trace:
        body = {"method": params.method.value, "N": params.N, "eta": params.eta, "k": params.k,
                "eps": params.eps, "M": params.M, "L": total, **scaling(params.method)}
        if args.trace:
            body["trace"] = [t.to_dict() for t in trace]
        write_json(body, args.out)
    else:
        write_text(f"{total}\n", args.out)
    return 0


def _sweep_values(args: argparse.Namespace) -> list:
    lo, hi = sorted((args.start, args.stop))
    if args.axis == "eps":
        if not (0.0 < lo and hi < 1.0):
            raise argparse.ArgumentTypeError(f"eps sweep bounds must lie in (0, 1) (got {args.start}, {args.stop})")
        return [float(v) for v in np.geomspace(lo, hi, args.points)]
    if lo < 1 or lo != int(lo) or hi != int(hi):
        raise argparse.ArgumentTypeError(f"N sweep bounds must be positive integers (got {args.start}, {args.stop})")
    return sorted({int(round(v)) for v in np.linspace(lo, hi, args.points)})


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.mode == "femo" and args.axis == "N":
        raise argparse.ArgumentTypeError("femo mode pins (N, eta) = (152, 113); sweep it along eps")
    values = _sweep_values(args)
    if args.mode == "femo":
        N, eta = FEMO_N, FEMO_ETA
    else:
        N = args.N
        eta = (7 * N + 7) // 8
    params = ComplexityParams(N, eta, args.k, args.eps, Method.SHADOW)
    table = complexity_sweep(params, args.axis, values, hubbard=args.mode == "hubbard",
                             wyy=_wyy(args), workers=args.workers)
    counts = [tuple(row.counts.get(c) for c in SWEEP_COLUMNS) for row in table.rows]
    if args.json:
        rows = [{args.axis: row.axis_value, "eta": row.eta, **dict(zip(SWEEP_COLUMNS, c))}
                for row, c in zip(table.rows, counts)]
        write_json({"mode": args.mode, "k": args.k, "axis": args.axis, "rows": rows}, args.out)
    elif args.with_eta:
        write_csv((args.axis, "eta") + SWEEP_COLUMNS,
                  [(row.axis_value, row.eta) + c for row, c in zip(table.rows, counts)], args.out)
    else:
        write_csv((args.axis,) + SWEEP_COLUMNS, [(row.axis_value,) + c for row, c in zip(table.rows, counts)], args.out)
    return 0


def cmd_hs_degree(args: argparse.Namespace) -> int:
    write_text(f"{hs_degree(args.t, args.eps)}\n", args.out)
    return 0


def cmd_oracle_fermion_norm(args: argparse.Namespace) -> int:
    report = sector_norm_report(args.N, args.eta, args.k, args.solver)
    write_json({"N": args.N, "eta": args.eta, "k": args.k, **report.to_dict()}, args.out)
    return 0


def cmd_oracle_identity(args: argparse.Namespace) -> int:
    rows = []
    for N in range(args.Nmax + 1):
        for k in range(N + 1):
            for eta in range(k, N - k + 1):
                lhs, rhs = identity_check(N, eta, k)
                rows.append((N, eta, k, lhs, rhs, lhs == rhs))
    failures = sum(1 for r in rows if not r[-1])
    log.info("[ORACLE] identity checked on %d cases, %d failures", len(rows), failures)
    write_csv(("N", "eta", "k", "lhs", "rhs", "pass"), rows, args.out)
    return 0 if failures == 0 else 1


def cmd_oracle_bernstein(args: argparse.Namespace) -> int:
    probe = make_probe(args.probe, args.p, args.alpha if args.probe == "kaiser" else None)
    threshold = args.threshold if args.threshold is not None else \
        bernstein_threshold(args.N, args.eta, args.k, probe, args.delta_prime)
    norms = coefficient_norm_samples(args.N, args.eta, args.k, probe, args.trials, args.seed)
    write_json({"N": args.N, "eta": args.eta, "k": args.k, "probe": probe.label, "trials": args.trials,
                "seed": args.seed, "delta_prime": args.delta_prime, "threshold": threshold,
                "rate": float(np.mean(norms > threshold)), "max_norm": float(norms.max())}, args.out)
    return 0


# -----------------------
# Parser
# -----------------------

def _add_common(p: argparse.ArgumentParser, json_flag: bool = True) -> None:
    p.add_argument("--out", default=None, help="output file (default stdout)")
    if json_flag:
        p.add_argument("--json", action="store_true", help="structured JSON instead of CSV")
    p.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logs")
    p.add_argument("--workers", type=pos_int, default=None, help="thread-pool width (HLESTIM_WORKERS)")


def _add_wyy(p: argparse.ArgumentParser) -> None:
    p.add_argument("--wyy-variance", type=pos_real, default=None, help="baseline probe variance")
    p.add_argument("--wyy-mu", type=half_open, default=None, help="baseline per-shot failure")
    p.add_argument("--wyy-delta-prime", type=unit_open, default=None, help="baseline concentration failure")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hlestim", description="Heisenberg-limited estimation calculators")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("qae-mse", help="amplitude-estimation MSE curves")
    p.add_argument("--q", type=qae_q, required=True, help="QAE register qubits")
    p.add_argument("--probe", choices=("uniform", "sine"), default="sine")
    p.add_argument("--points", type=pos_int, default=None, help="θ grid points (HLESTIM_QAE_POINTS)")
    p.add_argument("--theta-lo", type=theta_value, default=DEFAULT_THETA_LO)
    p.add_argument("--theta-hi", type=theta_value, default=DEFAULT_THETA_HI)
    p.add_argument("--full-range", action="store_true", help="sweep θ over the closed interval [0, π/2]")
    p.add_argument("--compare", action="store_true", help="sine, uniform and pointwise-optimal columns")
    p.add_argument("--solver", choices=EIGENSOLVERS, default=None, help="eigen-solver for --compare")
    p.add_argument("--expectation", action="store_true", help="MSE of the ±1 expectation estimator 2â-1")
    _add_common(p)
    p.set_defaults(func=cmd_qae_mse)

    p = sub.add_parser("probe-failure", help="phase-estimation failure curves")
    p.add_argument("--p", type=grid_p, default=3, help="probe qubits")
    p.add_argument("--family", choices=[f.value for f in GRID_FAMILIES] + ["all"], default="all")
    p.add_argument("--alpha", type=nonneg_real, default=None, help=f"Kaiser shape (default {DEFAULT_KAISER_ALPHA})")
    p.add_argument("--grid", type=grid_size, default=None, help="θ grid size (HLESTIM_QPE_POINTS)")
    p.add_argument("--scan-alpha", type=_alpha_list, default=None, help="comma-separated Kaiser α values")
    _add_common(p)
    p.set_defaults(func=cmd_probe_failure)

    p = sub.add_parser("complexity", help="total queries of one method")
    p.add_argument("--method", choices=SWEEP_COLUMNS, required=True)
    p.add_argument("--N", type=pos_int, required=True, help="fermionic modes")
    p.add_argument("--eta", type=nonneg_int, required=True, help="particle number")
    p.add_argument("--k", type=pos_int, required=True, help="RDM order")
    p.add_argument("--eps", type=unit_open, required=True, help="target precision")
    p.add_argument("--trace", action="store_true", help="per-iteration trace (implies JSON)")
    _add_wyy(p)
    _add_common(p)
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("sweep", help="all methods along ε or N")
    p.add_argument("--mode", choices=("femo", "hubbard"), required=True)
    p.add_argument("--k", type=pos_int, required=True)
    p.add_argument("--axis", choices=("eps", "N"), required=True)
    p.add_argument("--from", dest="start", type=pos_real, required=True)
    p.add_argument("--to", dest="stop", type=pos_real, required=True)
    p.add_argument("--points", type=pos_int, default=10)
    p.add_argument("--eps", type=unit_open, default=1e-3, help="fixed ε for N sweeps")
    p.add_argument("--N", type=pos_int, default=80, help="fixed N for hubbard ε sweeps")
    p.add_argument("--with-eta", action="store_true", help="add the particle-number column after the axis")
    _add_wyy(p)
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("hs-degree", help="polynomial degree Q for ε''-precise simulation")
    p.add_argument("--t", type=pos_real, required=True)
    p.add_argument("--eps", type=unit_open, required=True)
    _add_common(p, json_flag=False)
    p.set_defaults(func=cmd_hs_degree)

    oracle = sub.add_parser("oracle", help="brute-force oracles")
    osub = oracle.add_subparsers(dest="oracle", metavar="check")
    osub.required = True

    p = osub.add_parser("fermion-norm", help="sector norm of the square sum vs its closed form")
    p.add_argument("--N", type=pos_int, required=True)
    p.add_argument("--eta", type=nonneg_int, required=True)
    p.add_argument("--k", type=pos_int, required=True)
    p.add_argument("--solver", choices=EIGENSOLVERS, default="jacobi")
    _add_common(p, json_flag=False)
    p.set_defaults(func=cmd_oracle_fermion_norm)

    p = osub.add_parser("identity", help="exact binomial identity table")
    p.add_argument("--Nmax", type=nonneg_int, default=12)
    _add_common(p, json_flag=False)
    p.set_defaults(func=cmd_oracle_identity)

    p = osub.add_parser("bernstein", help="Monte-Carlo exceedance of the concentration threshold")
    p.add_argument("--N", type=pos_int, default=4)
    p.add_argument("--eta", type=nonneg_int, default=2)
    p.add_argument("--k", type=pos_int, default=1)
    p.add_argument("--probe", choices=[f.value for f in GRID_FAMILIES], default="cos1")
    p.add_argument("--p", type=grid_p, default=3)
    p.add_argument("--alpha", type=nonneg_real, default=DEFAULT_KAISER_ALPHA)
    p.add_argument("--trials", type=trial_count, default=10_000)
    p.add_argument("--seed", type=nonneg_int, default=0)
    p.add_argument("--threshold", type=pos_real, default=None, help="default: σ for the sector")
    p.add_argument("--delta-prime", type=unit_open, default=DELTA_PRIME)
    _add_common(p, json_flag=False)
    p.set_defaults(func=cmd_oracle_bernstein)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        level = load_config().log_level
    except ConfigError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    if args.verbose:
        level = "DEBUG" if args.verbose > 1 else "INFO"
    setup_logging(level)

    try:
        return args.func(args)
    except argparse.ArgumentTypeError as e:
        sys.stderr.write(f"hlestim {args.command}: error: {e}\n")
        return 2
    except HlestimError as e:
        log.debug("[ERROR] %s failed", args.command, exc_info=True)
        sys.stderr.write(f"error: {e}\n")
        return 1
    except Exception as e:
        log.debug("[ERROR] %s crashed", args.command, exc_info=True)
        sys.stderr.write(f"error: unexpected failure in {args.command}: {type(e).__name__}: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
