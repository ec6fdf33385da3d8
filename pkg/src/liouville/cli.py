"""Command-line front end.

Subcommands: thresholds, solve, sweep, limits, verify, normalize, curve.
Exit status 0 on success, 2 when results are flagged non-converged, 1 on
usage or domain errors.  Output is CSV or JSON per command; --plot renders a
figure file alongside the data where it makes sense.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from dataclasses import dataclass

import numpy as np

from . import algebra, reporting, shooting, verify
from .algebra import DomainError, SystemParams
from .ode import IntegratorConfig, integrate
from .shooting import BracketError
from .verify import GeneralSystem, NotConvergedError


@dataclass
class RunConfig:
    """Validated invocation: the chosen command plus its argparse namespace."""

    command: str
    args: argparse.Namespace


def _add_system(p: argparse.ArgumentParser, tau_required: bool = True) -> None:
    p.add_argument("--tau", type=float, required=tau_required, default=None,
                   help="competition parameter, in (0, 1)")
    p.add_argument("--N", dest="bigN", type=float, required=True,
                   help="vortex exponent N > 0")


def _add_tolerances(p: argparse.ArgumentParser, t_max: float = 60.0) -> None:
    p.add_argument("--rel-tol", type=float, default=1e-10)
    p.add_argument("--abs-tol", type=float, default=1e-12)
    p.add_argument("--tail-tol", type=float, default=1e-8)
    p.add_argument("--t-max", type=float, default=t_max,
                   help="log-radius horizon")


def _add_output(p: argparse.ArgumentParser, formats=("json", "csv"),
                default: str = "json") -> None:
    p.add_argument("--out", type=str, default=None,
                   help="output path (default: stdout)")
    if formats:
        p.add_argument("--format", choices=list(formats), default=default)


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="liouville",
        description="Radial solver and flux-curve toolkit for the competitive "
                    "two-component Liouville system.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("thresholds", help="closed-form threshold values")
    _add_system(p, tau_required=False)
    _add_output(p, formats=("json",))
    p.add_argument("--plot", type=str, default=None,
                   help="render the interval endpoints vs tau to this file")

    p = sub.add_parser("solve", help="integrate one shooting run")
    _add_system(p)
    p.add_argument("--alpha", type=float, default=None,
                   help="initial value of the weighted component")
    p.add_argument("--target-beta1", type=float, default=None,
                   help="instead of --alpha, solve for the alpha hitting this flux")
    p.add_argument("--bracket", type=float, nargs=2, metavar=("LO", "HI"),
                   default=None, help="alpha bracket for --target-beta1")
    _add_tolerances(p)
    _add_output(p)
    p.add_argument("--diagnostics", action="store_true",
                   help="append monotone-diagnostic columns to CSV output")

    p = sub.add_parser("sweep", help="trace the flux curve over an alpha grid")
    _add_system(p)
    p.add_argument("--alpha-min", type=float, required=True)
    p.add_argument("--alpha-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=41)
    _add_tolerances(p)
    _add_output(p, default="csv")
    p.add_argument("--plot", type=str, default=None,
                   help="render swept pairs over the branch arc to this file")

    p = sub.add_parser("limits", help="estimate the curve limits at alpha -> +-inf")
    _add_system(p)
    p.add_argument("--alpha-max", type=float, default=30.0)
    _add_tolerances(p, t_max=100.0)
    _add_output(p, formats=("json",))

    p = sub.add_parser("verify", help="test a flux pair for radial solvability")
    _add_system(p)
    p.add_argument("--beta1", type=float, required=True)
    p.add_argument("--beta2", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-4,
                   help="relative tolerance on the branch constraint")
    _add_output(p, formats=("json",))

    p = sub.add_parser("normalize", help="map a coupling matrix to (tau1, tau2)")
    for k in ("k11", "k12", "k21", "k22"):
        p.add_argument(f"--{k}", type=float, required=True)
    p.add_argument("--n1", type=float, required=True)
    p.add_argument("--n2", type=float, default=0.0)
    _add_output(p, formats=("json",))

    p = sub.add_parser("curve", help="sample the admissible branch arc")
    _add_system(p)
    p.add_argument("--samples", type=int, default=200)
    _add_output(p, formats=("csv", "json"), default="csv")
    p.add_argument("--plot", type=str, default=None)

    return top


def parse_args(argv=None) -> RunConfig:
    """Parse and validate; raises DomainError for out-of-range values."""
    args = _build_parser().parse_args(argv)

    for name in ("rel_tol", "abs_tol", "tail_tol"):
        if hasattr(args, name) and getattr(args, name) <= 0.0:
            raise DomainError(f"--{name.replace('_', '-')} must be positive")
    if getattr(args, "steps", 1) < 1:
        raise DomainError("--steps must be >= 1")
    if getattr(args, "samples", 2) < 2:
        raise DomainError("--samples must be >= 2")

    tau = getattr(args, "tau", None)
    if tau is not None:
        if not (0.0 <= tau < 1.0):
            raise DomainError(
                f"tau = {tau} rejected: solvability requires tau in (0, 1)"
            )
        if tau == 0.0 and args.command not in ("solve", "sweep"):
            raise DomainError(
                "tau = 0 (decoupled oracle mode) is allowed only for solve/sweep"
            )
    if getattr(args, "bigN", 1.0) is not None and getattr(args, "bigN", 1.0) <= 0.0:
        raise DomainError("--N must be positive")

    if args.command == "solve":
        if (args.alpha is None) == (args.target_beta1 is None):
            raise DomainError("solve needs exactly one of --alpha / --target-beta1")
        if args.target_beta1 is not None and args.bracket is None:
            raise DomainError("--target-beta1 needs --bracket LO HI")
    return RunConfig(command=args.command, args=args)


def _integrator_config(args) -> IntegratorConfig:
    return IntegratorConfig(
        rel_tol=args.rel_tol, abs_tol=args.abs_tol,
        tail_tol=args.tail_tol, t_max=args.t_max,
    )


@contextlib.contextmanager
def _open_out(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _cmd_thresholds(args) -> int:
    payload = reporting.thresholds_to_dict(args.bigN, args.tau)
    with _open_out(args.out) as fh:
        reporting.dump_json(payload, fh)
    if args.plot:
        reporting.plot_thresholds(args.bigN, args.plot)
    return 0


def _cmd_solve(args) -> int:
    params = SystemParams(tau=args.tau, bigN=args.bigN)
    cfg = _integrator_config(args)
    if args.target_beta1 is not None:
        result = shooting.solve_for_target(
            params, args.target_beta1, tuple(args.bracket), cfg
        )
        with _open_out(args.out) as fh:
            reporting.dump_json(result.to_dict(), fh)
        return 0
    traj = integrate(params, args.alpha, cfg)
    with _open_out(args.out) as fh:
        if args.format == "csv":
            reporting.write_trajectory_csv(
                traj, fh, include_r_quantities=args.diagnostics
            )
        else:
            reporting.dump_json(reporting.solve_to_dict(traj), fh)
    return 0 if traj.converged else 2


def _cmd_sweep(args) -> int:
    params = SystemParams(tau=args.tau, bigN=args.bigN)
    if args.steps == 1 and args.alpha_min != args.alpha_max:
        raise DomainError("--steps 1 needs --alpha-min == --alpha-max")
    grid = np.linspace(args.alpha_min, args.alpha_max, args.steps)
    result = shooting.sweep(params, grid, _integrator_config(args))
    with _open_out(args.out) as fh:
        if args.format == "csv":
            reporting.write_sweep_csv(result, fh)
        else:
            reporting.dump_json(reporting.sweep_to_dict(result), fh)
    if args.plot:
        reporting.plot_sweep(result, args.plot)
    return 0 if all(p.converged for p in result.points) else 2


def _cmd_limits(args) -> int:
    params = SystemParams(tau=args.tau, bigN=args.bigN)
    result = shooting.estimate_limits(
        params, args.alpha_max, _integrator_config(args)
    )
    with _open_out(args.out) as fh:
        reporting.dump_json(result.to_dict(), fh)
    return 0 if result.reliable else 2


def _cmd_verify(args) -> int:
    params = SystemParams(tau=args.tau, bigN=args.bigN)
    report = algebra.solvable_radial(args.beta1, args.beta2, params, tol=args.tol)
    conditions = algebra.necessary_conditions(args.beta1, args.beta2, params)
    payload = {
        "tau": args.tau,
        "bigN": args.bigN,
        "beta1": args.beta1,
        "beta2": args.beta2,
        "solvable": report.solvable,
        "near_endpoint": report.near_endpoint,
        "checks": [c.to_dict() for c in report.checks],
        "necessary_conditions": conditions.to_dict(),
    }
    with _open_out(args.out) as fh:
        reporting.dump_json(payload, fh)
    return 0


def _cmd_normalize(args) -> int:
    sys_ = GeneralSystem(k11=args.k11, k12=args.k12, k21=args.k21,
                         k22=args.k22, n1=args.n1, n2=args.n2)
    result = verify.normalize_general(sys_)
    with _open_out(args.out) as fh:
        reporting.dump_json(result.to_dict(), fh)
    return 0


def _cmd_curve(args) -> int:
    params = SystemParams(tau=args.tau, bigN=args.bigN)
    with _open_out(args.out) as fh:
        if args.format == "csv":
            reporting.write_curve_csv(params, args.samples, fh)
        else:
            arc = reporting.curve_samples(params, args.samples)
            reporting.dump_json(
                {"tau": args.tau, "bigN": args.bigN,
                 "beta1": [float(v) for v in arc[:, 0]],
                 "beta2": [float(v) for v in arc[:, 1]]}, fh
            )
    if args.plot:
        reporting.plot_curve(params, args.plot, samples=args.samples)
    return 0


_DISPATCH = {
    "thresholds": _cmd_thresholds,
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "limits": _cmd_limits,
    "verify": _cmd_verify,
    "normalize": _cmd_normalize,
    "curve": _cmd_curve,
}


def run(config: RunConfig) -> int:
    """Dispatch a validated config; returns the process exit status."""
    return _DISPATCH[config.command](config.args)


def main(argv=None) -> int:
    try:
        config = parse_args(argv)
    except SystemExit as exc:  # argparse help (0) or usage error
        return 0 if exc.code in (0, None) else 1
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return run(config)
    except (DomainError, BracketError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NotConvergedError as exc:
        print(f"not converged: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
