"""wickrot command line.

Exit codes: 0 when every check passes, 2 when any axiom, index, clifford
or pipeline check fails, 1 on usage, configuration or I/O errors.
"""

from __future__ import annotations

import argparse
import asyncio
import sys
from typing import Any, Dict, List, Optional

from core.errors import ConfigError, WickrotError
from shared.config import debug_logs_enabled

from .config import Task, build_config, load_config_file, merge_flags, parse_float_list, parse_int_list, parse_s_grid
from .graph import run_pipeline
from .report import build_report, report_stem, write_outputs

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration; flags override its fields")
    common.add_argument("--model", help="model descriptor JSON")
    common.add_argument("--levels", help="truncation levels, comma-separated and increasing")
    common.add_argument("--s-grid", dest="s_grid", help="zeta exponents as start:stop:step")
    common.add_argument("--t", dest="t_list", help="heat times, comma-separated")
    common.add_argument("--winding", type=int, help="winding number m of the unitary exp(2im arctan x)")
    common.add_argument("--signature", help="Clifford signature as t,s")
    common.add_argument("--fixtures", help="descriptor directory used by 'all'")
    common.add_argument("--out", help="output directory")
    common.add_argument("--tol", action="append", default=[], metavar="KEY=VAL", help="tolerance override (repeatable)")
    common.add_argument("--threads", type=int, help="worker threads for parameter sweeps")

    parser = _Parser(prog="wickrot", description="Wick rotation toolkit for pseudo-Riemannian spectral triples.")
    commands = parser.add_subparsers(dest="task", required=True, parser_class=_Parser)
    descriptions = {
        Task.verify: "audit the spectral-triple axioms and the Wick pipeline",
        Task.zeta: "spectral dimension from zeta traces with a Mellin cross-check",
        Task.heat: "heat traces, with the Mehler oracle for the oscillator",
        Task.index: "residue pairing or McKean-Singer graded index",
        Task.clifford: "gamma-matrix identity suite",
        Task.all: "every applicable task on every fixture descriptor",
    }
    for task, text in descriptions.items():
        commands.add_parser(task.value, parents=[common], help=text, description=text)
    return parser


def _flag_payload(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "task": args.task,
        "model": args.model,
        "levels": parse_int_list(args.levels, "--levels") if args.levels else None,
        "s_grid": parse_s_grid(args.s_grid) if args.s_grid else None,
        "t_list": parse_float_list(args.t_list, "--t") if args.t_list else None,
        "winding": args.winding,
        "signature": args.signature,
        "fixtures": args.fixtures,
        "out": args.out,
        "threads": args.threads,
        "tol": list(args.tol),
    }


def _progress(line: str) -> None:
    print(f"wickrot: {line}", file=sys.stderr)


def run(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        base = load_config_file(args.config) if args.config else {}
        config = build_config(merge_flags(base, _flag_payload(args)))
        tolerances = config.resolved_tolerances()
        _progress(f"{config.task.value} started")
        state = asyncio.run(run_pipeline(config, tolerances))
        outcomes = state.get("outcomes", [])
        logs = state.get("logs", []) if debug_logs_enabled() else None
        report = build_report(config.task, outcomes, tolerances, logs)
        paths = write_outputs(report, outcomes, config.out, report_stem(config.task, outcomes))
    except ConfigError as exc:
        _progress(f"error: {exc}")
        return EXIT_USAGE
    except WickrotError as exc:
        _progress(f"error: {type(exc).__name__}: {exc}")
        return EXIT_USAGE
    except OSError as exc:
        _progress(f"I/O error: {exc}")
        return EXIT_USAGE

    for failure in report["failures"]:
        _progress(f"FAIL {failure}")
    for path in paths:
        print(path)
    _progress(f"{config.task.value} {'passed' if report['passed'] else 'failed'}")
    return EXIT_OK if report["passed"] else EXIT_FAILED


def main() -> None:
    sys.exit(run())


__all__ = ["EXIT_OK", "EXIT_USAGE", "EXIT_FAILED", "build_parser", "run", "main"]
