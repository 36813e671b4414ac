"""``dads-lab`` command line: simulate, verify, check-assumption-a, constants, sweep.

Exit codes: 0 pass, 1 check failure, 2 configuration error, 3 runtime abort.
Outputs go to ``./dads_out`` unless ``DADS_OUT`` names another directory.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from ..certificates import check_assumption_a, theorem3_constants
from ..errors import ConfigurationError, DomainError
from .config import load_scenario
from .export import export_csv
from .verify import run_scenario

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_ABORT = 0, 1, 2, 3


def out_dir() -> Path:
    return Path(os.environ.get("DADS_OUT", "dads_out"))


def _run_and_export(config: str):
    scenario = load_scenario(config)
    traj, report = run_scenario(scenario)
    csv_path, rep_path = export_csv(traj, report, out_dir() / scenario.name)
    return scenario, report, csv_path, rep_path


def _exit_code(report) -> int:
    if report.aborted:
        return EXIT_ABORT
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_simulate(args) -> int:
    scenario, report, csv_path, rep_path = _run_and_export(args.config)
    print(f"trajectory: {csv_path}")
    print(f"report: {rep_path}")
    if report.aborted:
        print(f"aborted: {report.abort_reason}", file=sys.stderr)
        return EXIT_ABORT
    return EXIT_PASS


def cmd_verify(args) -> int:
    scenario, report, _, rep_path = _run_and_export(args.config)
    for c in report.checks:
        print(f"{c.check_id:<22} {c.status:<13} margin={c.worst_margin:.6g} at t={c.worst_time:.6g}")
    if report.aborted:
        print(f"aborted: {report.abort_reason}")
    print(f"overall: {'pass' if report.passed else 'fail'} ({rep_path})")
    return _exit_code(report)


def cmd_check_assumption(args) -> int:
    scenario = load_scenario(args.config)
    result = check_assumption_a(scenario.bundle)
    print(result.table())
    print(f"points: {result.n_points}")
    return EXIT_PASS if result.passed else EXIT_FAIL


def cmd_constants(args) -> int:
    consts = theorem3_constants(args.p, args.c, args.a, args.b, args.epsilon, args.gamma_rate)
    for key in ("kappa", "Kbar", "Bbar"):
        print(f"{key} = {getattr(consts, key):.17g}")
    return EXIT_PASS


def _sweep_one(path: str):
    try:
        scenario, report, _, _ = _run_and_export(path)
        status = "aborted" if report.aborted else ("pass" if report.passed else "fail")
        return scenario.name, status, _exit_code(report)
    except (ConfigurationError, DomainError) as exc:
        return Path(path).stem, f"config-error: {exc}", EXIT_CONFIG


def cmd_sweep(args) -> int:
    configs = sorted(str(p) for p in Path(args.directory).glob("*.cfg"))
    if not configs:
        raise ConfigurationError(f"no *.cfg files in {args.directory}")
    with ProcessPoolExecutor(max_workers=args.workers) as pool:
        results = list(pool.map(_sweep_one, configs))
    lines = [f"{'scenario':<32} status"] + [f"{name:<32} {status}" for name, status, _ in results]
    out = out_dir()
    out.mkdir(parents=True, exist_ok=True)
    (out / "sweep_summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print("\n".join(lines))
    return max(code for _, _, code in results)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dads-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, helptext in (
        ("simulate", cmd_simulate, "simulate a scenario, write CSV and report"),
        ("verify", cmd_verify, "simulate and exit 0 iff every check passes"),
        ("check-assumption-a", cmd_check_assumption, "grid check of the certificate inequalities"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("config")
        p.set_defaults(func=fn)
    p = sub.add_parser("constants", help="print kappa, Kbar, Bbar of the diffusion-loop estimates")
    for flag in ("p", "c", "a", "b", "epsilon", "gamma_rate"):
        p.add_argument(f"--{flag}", type=float, required=True)
    p.set_defaults(func=cmd_constants)
    p = sub.add_parser("sweep", help="run every *.cfg in a directory")
    p.add_argument("directory")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
