"""Command-line front end.

Subcommands:
  point     evaluate P_v / P_m / P_p / P_avg at one parameter point
  sweep     run a config-driven parameter sweep to CSV
  figure    regenerate one of the built-in figure datasets
  validate  run the full cross-validation suite

All inputs are dimensionless, in units of the packet width sigma
(m/sigma, omega/sigma, x0*sigma, k0/sigma, tau*sigma).  Results go to
stdout in machine-parseable form; diagnostics go to stderr.

Exit codes: 0 success, 1 failed validation, 2 usage error, 3 numeric
non-convergence, 4 domain error, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .experiments import (
    FIGURE_IDS,
    SweepSpec,
    figure_dataset,
    run_sweep,
    run_validation,
)
from .kernels import ParticleState
from .quadrature import ConvergenceError, QuadratureSpec
from .response import (
    PERTURBATIVITY_THRESHOLD,
    DetectorConfig,
    p_avg,
    p_matter_auto,
    p_vacuum,
)

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3
EXIT_DOMAIN = 4
EXIT_IO = 5

_POINT_QUANTITIES = ("p_v", "p_m", "p_p", "p_avg")


class UsageError(ValueError):
    """Invalid flag values or config structure; maps to exit code 2."""


def _fmt(x):
    return f"{float(x):.16e}"


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="udw",
        description="Detector transition probabilities for a massive scalar "
                    "field in 1+1D, vacuum and single-particle states.",
        epilog="Exit codes: 0 ok, 1 failed validation check, 2 usage, "
               "3 non-convergence, 4 domain error, 5 I/O error.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pt = sub.add_parser("point", help="evaluate one parameter point")
    pt.add_argument("--m", type=float, required=True, help="particle mass m/sigma")
    pt.add_argument("--omega", type=float, required=True, help="detector gap omega/sigma")
    pt.add_argument("--lambda", dest="lam", type=float, default=1.0,
                    help="coupling strength (default 1)")
    pt.add_argument("--tau-i", type=float, default=0.0, help="switch-on time tau_i*sigma")
    window = pt.add_mutually_exclusive_group(required=True)
    window.add_argument("--tau-f", type=float, help="switch-off time tau_f*sigma")
    window.add_argument("--delta-tau", type=float, help="window length (tau_f - tau_i)*sigma")
    pt.add_argument("--x0", type=float, default=0.0, help="packet center x0*sigma")
    pt.add_argument("--k0", type=float, default=0.0, help="packet momentum k0/sigma")
    pt.add_argument("--quantities", default="p_v,p_m,p_p",
                    help=f"comma list from {{{','.join(_POINT_QUANTITIES)}}}")
    pt.add_argument("--format", choices=("text", "csv"), default="text")
    pt.add_argument("--rel-tol", type=float, default=None, help="quadrature relative tolerance")

    sw = sub.add_parser("sweep", help="run a sweep described by a JSON config")
    sw.add_argument("--config", required=True, help="path to the sweep config (JSON)")
    sw.add_argument("--out", default=None, help="output CSV path (overrides config)")
    sw.add_argument("--jobs", type=int, default=1, help="parallel workers")

    fg = sub.add_parser("figure", help="regenerate a built-in figure dataset")
    fg.add_argument("--id", dest="fig_id", required=True, help="fig1 .. fig5")
    fg.add_argument("--out", default=None,
                    help="output directory (default $UDW_OUTPUT_DIR or .)")
    fg.add_argument("--steps", type=int, default=None, help="override axis grid density")
    fg.add_argument("--jobs", type=int, default=1, help="parallel workers")

    va = sub.add_parser("validate", help="run the cross-validation suite")
    va.add_argument("--report", default=None, help="write the JSON report here")
    va.add_argument("--fast", action="store_true", help="smaller oracle grids")

    return parser


def _cmd_point(args):
    quantities = [q.strip() for q in args.quantities.split(",") if q.strip()]
    for q in quantities:
        if q not in _POINT_QUANTITIES:
            raise UsageError(f"unknown quantity {q!r}; choose from {_POINT_QUANTITIES}")
    try:
        spec = QuadratureSpec() if args.rel_tol is None else QuadratureSpec(rel_tol=args.rel_tol)
        state = ParticleState(m=args.m, x0=args.x0, k0=args.k0)
        tau_f = args.tau_f if args.tau_f is not None else args.tau_i + args.delta_tau
        det = DetectorConfig(omega=args.omega, lam=args.lam, tau_i=args.tau_i, tau_f=tau_f)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    values = {}
    errors = {}
    method = ""
    flags = []
    if {"p_v", "p_m", "p_p"} & set(quantities):
        p_v, p_v_err = p_vacuum(state.m, det, spec)
        p_m, p_m_err, method, resonant = p_matter_auto(state, det, spec)
        values.update(p_v=p_v, p_m=p_m, p_p=p_v + p_m)
        errors.update(p_v=p_v_err, p_m=p_m_err, p_p=p_v_err + p_m_err)
        if resonant:
            flags.append("resonance")
        if values["p_p"] > PERTURBATIVITY_THRESHOLD:
            flags.append("perturbativity")
    if "p_avg" in quantities:
        values["p_avg"] = p_avg(state, det, spec)
        errors["p_avg"] = abs(values["p_avg"]) * spec.rel_tol

    flag_text = "|".join(flags)
    if args.format == "csv":
        header = []
        row = []
        for q in quantities:
            header.extend([q, f"{q}_err"])
            row.extend([_fmt(values[q]), _fmt(errors[q])])
        header.extend(["method", "flags"])
        row.extend([method, flag_text])
        print(",".join(header))
        print(",".join(row))
    else:
        for q in quantities:
            print(f"{q}={_fmt(values[q])} ±{errors[q]:.3e}")
        print(f"method={method}")
        print(f"flags={flag_text}")
    return EXIT_OK


def _cmd_sweep(args):
    with open(args.config, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"config is not valid JSON: {exc}") from exc
    try:
        spec = SweepSpec.from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad sweep config: {exc}") from exc
    out = args.out or spec.output_path
    if not out:
        raise UsageError("no output path: set output_path in the config or pass --out")
    dataset = run_sweep(spec, jobs=args.jobs)
    dataset.write_csv(out)
    if dataset.n_failed:
        print(f"{dataset.n_failed} grid point(s) failed; see the error column in {out}",
              file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    print(out)
    return EXIT_OK


def _cmd_figure(args):
    if args.fig_id not in FIGURE_IDS:
        raise UsageError(f"unknown figure id {args.fig_id!r}; expected one of {FIGURE_IDS}")
    if args.steps is not None and args.steps < 2:
        raise UsageError("--steps must be >= 2")
    out_dir = args.out or os.environ.get("UDW_OUTPUT_DIR", ".")
    spec = figure_dataset(args.fig_id, steps=args.steps)
    dataset = run_sweep(spec, jobs=args.jobs)
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{args.fig_id}.csv")
    dataset.write_csv(path)
    if dataset.n_failed:
        print(f"{dataset.n_failed} grid point(s) failed; see the error column in {path}",
              file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    print(path)
    return EXIT_OK


def _cmd_validate(args):
    report = run_validation(fast=args.fast)
    doc = json.dumps(report.to_dict(), indent=2, sort_keys=True)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(doc + "\n")
    else:
        print(doc)
    for check in report.checks:
        status = "pass" if check.passed else "FAIL"
        print(f"{status} {check.check_id}: measured {check.measured:.3e} "
              f"(tol {check.tolerance:.1e}, {check.seconds:.1f}s)", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAILED_CHECK


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "point": _cmd_point,
        "sweep": _cmd_sweep,
        "figure": _cmd_figure,
        "validate": _cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (OverflowError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
