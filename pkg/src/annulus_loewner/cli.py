"""Command line front end.

Subcommands: kernel, evolve, verify, lebedev, schema.  Exit codes: 0 on
success, 1 when verification checks fail, 2 on input errors, 3 on
numerical failures.  Outputs are deterministic for a fixed scenario and
seed, with 17 significant digits everywhere.
"""

from __future__ import annotations

import argparse
import sys

from .errors import (
    AnnulusLoewnerError,
    BandViolation,
    BoundaryTermination,
    ConvergenceError,
    LiftingError,
    ScenarioError,
    StepFailure,
)
from .kernels import villat_kernel
from .ode import COMPLETE
from .scenarios import (
    emit_schema,
    load_scenario,
    run_evolve,
    run_kernel_probe,
    run_lebedev,
    run_verify,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_NUMERICAL = 3

_NUMERICAL_ERRORS = (
    StepFailure,
    BoundaryTermination,
    ConvergenceError,
    BandViolation,
    LiftingError,
)


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise ScenarioError(f"expected RE,IM, got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise ScenarioError(f"cannot parse complex {text!r}: {exc}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annulus-loewner",
        description="Loewner evolution families over annuli",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    kern = sub.add_parser("kernel", help="evaluate the annulus kernel at a point")
    kern.add_argument("--r", type=float, required=True, help="inner radius in [0, 1)")
    kern.add_argument("--z", required=True, help="evaluation point as RE,IM")

    for name, expects_seed in [("evolve", False), ("verify", True), ("lebedev", False)]:
        p = sub.add_parser(name, help=f"run a {name} scenario file")
        p.add_argument("--config", required=True, help="scenario JSON path")
        if expects_seed:
            p.add_argument("--seed", type=int, default=None, help="override the scenario seed")

    sub.add_parser("schema", help="print the scenario JSON schema")
    return parser


def _require_kind(scenario, kind: str) -> None:
    if scenario.kind != kind:
        raise ScenarioError(
            f"scenario {scenario.id!r} has kind {scenario.kind!r}; expected {kind!r}"
        )


def run(argv=None) -> int:
    """Execute one subcommand; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT_ERROR if exc.code not in (0, None) else EXIT_OK

    try:
        if args.command == "schema":
            print(emit_schema())
            return EXIT_OK

        if args.command == "kernel":
            value = villat_kernel(args.r, _parse_complex(args.z))
            print(f"{value.real:.17g} {value.imag:+.17g}i")
            return EXIT_OK

        scenario = load_scenario(args.config)

        if args.command == "evolve":
            _require_kind(scenario, "evolve")
            trajectories = run_evolve(scenario)
            bad = [t for t in trajectories if t.status != COMPLETE]
            for k, traj in enumerate(trajectories):
                print(
                    f"point {k}: status={traj.status} t_end={traj.validity_end:.17g} "
                    f"endpoint={traj.endpoint.real:.17g}{traj.endpoint.imag:+.17g}i"
                )
            if bad:
                raise StepFailure(f"{len(bad)} trajectories did not complete")
            return EXIT_OK

        if args.command == "verify":
            _require_kind(scenario, "verify")
            report = run_verify(scenario, seed=args.seed)
            for check in report.checks:
                tag = "PASS" if check.passed else "FAIL"
                print(
                    f"[{tag}] {check.name}: residual={check.residual:.17g} "
                    f"tol={check.tol:.17g}"
                )
            return EXIT_OK if report.passed else EXIT_CHECK_FAILED

        if args.command == "lebedev":
            _require_kind(scenario, "lebedev")
            result = run_lebedev(scenario)
            mt = result["mt"]
            print(f"m_t samples: {len(mt.times)}  final m_t={mt.values[-1]:.17g}")
            bad = [t for t in result["trajectories"] if t.status != COMPLETE]
            for k, traj in enumerate(result["trajectories"]):
                print(
                    f"seed {k}: status={traj.status} "
                    f"f_end={traj.endpoint.real:.17g}{traj.endpoint.imag:+.17g}i"
                )
            if not result["band_ok"]:
                raise BandViolation("m_t left the band (r(t), 1)")
            if bad:
                raise StepFailure(f"{len(bad)} slit trajectories did not complete")
            return EXIT_OK

        raise ScenarioError(f"unknown command {args.command!r}")
    except ScenarioError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except AnnulusLoewnerError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def main() -> None:
    sys.exit(run())
