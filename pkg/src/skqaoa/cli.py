"""Command-line entry point ``skqaoa``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
import sys

import numpy as np

from . import experiments as ex
from .annealing import AnnealingConvergenceError
from .gmatrix import GMatrixError, infinite_size_energy, multistart_spread, save_g_csv, solve_angles
from .qgms import empirical_concentration, monte_carlo_disorder_average, qgms_energy_exact, quadrature_disorder_average
from .schedules import DiscreteAngles, discretize, table_one_schedule

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _floats(text):
    return [float(x) for x in text.replace(",", " ").split()]


def _ints(text):
    return [int(x) for x in text.replace(",", " ").split()]


def _sweep_overrides(args):
    return {
        "ps": args.ps and _ints(args.ps),
        "ns": args.ns and _ints(args.ns),
        "deltas": getattr(args, "deltas", None) and _floats(args.deltas),
        "T": getattr(args, "T", None),
        "instances": args.instances,
        "base_seed": args.base_seed,
        "tol": args.tol,
        "rule": args.rule,
        "workers": args.workers,
    }


def _add_sweep_args(sp):
    sp.add_argument("--config", help="key = value config file")
    sp.add_argument("--ps", help="comma-separated layer counts")
    sp.add_argument("--ns", help="comma-separated qubit counts")
    sp.add_argument("--instances", type=int)
    sp.add_argument("--base-seed", type=int)
    sp.add_argument("--tol", type=float, help="annealing energy tolerance")
    sp.add_argument("--rule", choices=["midpoint", "theory"])
    sp.add_argument("--workers", type=int)
    sp.add_argument("--csv", help="output CSV path (default: stdout)")
    sp.add_argument("--svg", help="output SVG path")


def cmd_sweep_constant_time(args):
    cfg = ex.load_config(args.config, _sweep_overrides(args))
    records = ex.run_constant_time_sweep(cfg)
    _emit(records, args)
    for n in cfg.ns:
        errs = [r for r in ex.select(records, metric="abs_error", n=n)]
        if len(errs) >= 3 and all(r.value > 0 for r in errs):
            slope, _, r2 = ex.fit_decay_exponent([r.p for r in errs], [r.value for r in errs])
            print(f"# n={n}: slope {slope:.3f}, r2 {r2:.3f}", file=sys.stderr)
    return EXIT_OK


def cmd_sweep_delta(args):
    cfg = ex.load_config(args.config, _sweep_overrides(args))
    _emit(ex.run_delta_sweep(cfg), args)
    return EXIT_OK


def _emit(records, args):
    if args.csv:
        ex.emit_outputs(records, csv_path=args.csv)
    else:
        sys.stdout.write(ex.records_to_csv(records))
    if args.svg:
        ex.emit_outputs(records, svg_path=args.svg)


def _angles(args):
    if args.gammas or args.betas:
        if not (args.gammas and args.betas):
            raise ex.ConfigError("--gammas and --betas must be given together")
        return DiscreteAngles(_floats(args.gammas), _floats(args.betas))
    return discretize(table_one_schedule(args.delta, args.p), args.p, args.rule)


def _add_angle_args(sp, p_default=1):
    sp.add_argument("--p", type=int, default=p_default)
    sp.add_argument("--delta", type=float, default=1.0)
    sp.add_argument("--rule", choices=["midpoint", "theory"], default="midpoint")
    sp.add_argument("--gammas", help="explicit gamma_1..gamma_p (overrides the reference schedule)")
    sp.add_argument("--betas", help="explicit beta_1..beta_p")


def cmd_gmatrix(args):
    angles = _angles(args)
    q, sol = solve_angles(angles, tol=args.tol, damping=args.damping, max_iter=args.max_iter)
    energy = infinite_size_energy(sol.G, angles.Gamma)
    print(f"p = {angles.p}")
    print(f"energy = {energy:.12f}")
    print(f"iterations = {sol.iterations}")
    print(f"fixed_point_residual = {sol.residual:.3e}")
    print(f"z_residual = {sol.z_residual:.3e}")
    print(f"norm_inf = {sol.norm_inf:.6f}")
    if args.multistart:
        print(f"multistart_spread = {multistart_spread(angles, starts=args.multistart):.3e}")
    if args.csv:
        save_g_csv(sol.G, args.csv)
    return EXIT_OK


def cmd_oracle_check(args):
    angles = _angles(args)
    exact = qgms_energy_exact(args.n, angles)
    quad = quadrature_disorder_average(args.n, angles, args.nodes)
    mean, se = monte_carlo_disorder_average(args.n, angles, "qaoa", args.instances, args.base_seed)
    print(f"qgms_exact = {exact:.12f}")
    print(f"quadrature = {quad:.12f}")
    print(f"monte_carlo = {mean:.12f} +- {se:.2e}")
    ok = abs(exact - quad) <= 1e-6 and abs(mean - exact) <= 3 * se and abs(mean - quad) <= 3 * se
    print("agreement = " + ("yes" if ok else "no"))
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_concentration(args):
    angles = _angles(args)
    rows, slope = empirical_concentration(_ints(args.ns), angles, args.instances, args.base_seed)
    print("n,mean,variance")
    for n, mean, var in rows:
        print(f"{n},{mean!r},{var!r}")
    print(f"# variance slope vs n (log-log): {slope:.3f}", file=sys.stderr)
    return EXIT_OK


def cmd_plot(args):
    records = ex.read_csv(args.input)
    ex.emit_outputs(records, svg_path=args.svg, metric=args.metric, log=args.log)
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="skqaoa", description="SK-model QAOA vs quantum annealing experiments")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sweep-constant-time", help="error |nu_p - nu_inf| at fixed total time T")
    _add_sweep_args(sp)
    sp.add_argument("--T", type=float, help="total time delta * p")
    sp.set_defaults(fn=cmd_sweep_constant_time)

    sp = sub.add_parser("sweep-delta", help="approximation-ratio residuals across delta")
    _add_sweep_args(sp)
    sp.add_argument("--deltas", help="comma-separated delta values")
    sp.set_defaults(fn=cmd_sweep_delta)

    sp = sub.add_parser("gmatrix", help="infinite-size energy from the G-matrix fixed point")
    _add_angle_args(sp)
    sp.add_argument("--tol", type=float, default=1e-12)
    sp.add_argument("--damping", type=float, default=1.0)
    sp.add_argument("--max-iter", type=int, default=500)
    sp.add_argument("--multistart", type=int, default=0, help="number of perturbed restarts to compare")
    sp.add_argument("--csv", help="write G as j,k,re,im rows")
    sp.set_defaults(fn=cmd_gmatrix)

    sp = sub.add_parser("oracle-check", help="QGMS exact vs quadrature vs Monte Carlo")
    _add_angle_args(sp)
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--nodes", type=int, default=64)
    sp.add_argument("--instances", type=int, default=10000)
    sp.add_argument("--base-seed", type=int, default=0)
    sp.set_defaults(fn=cmd_oracle_check)

    sp = sub.add_parser("concentration", help="variance of the per-instance energy vs n")
    _add_angle_args(sp, p_default=8)
    sp.add_argument("--ns", default="8,12,16,20")
    sp.add_argument("--instances", type=int, default=200)
    sp.add_argument("--base-seed", type=int, default=0)
    sp.set_defaults(fn=cmd_concentration)

    sp = sub.add_parser("plot", help="SVG plot from a sweep CSV")
    sp.add_argument("input")
    sp.add_argument("--svg", required=True)
    sp.add_argument("--metric")
    sp.add_argument("--log", action=argparse.BooleanOptionalAction, default=None)
    sp.set_defaults(fn=cmd_plot)
    return ap


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors already
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (ex.ConfigError, FileNotFoundError) as exc:
        print(f"skqaoa: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GMatrixError, AnnealingConvergenceError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"skqaoa: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"skqaoa: invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
