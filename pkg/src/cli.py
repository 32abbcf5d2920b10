#!/usr/bin/env python3
# Copyright 2023 Canonical Ltd.
# See LICENSE file for licensing details.

"""Command line entry point: `liederive build | validate | solve | witt | verify`."""

import argparse
import logging
import sys
import time
from typing import Any, Callable, Dict, Optional, Sequence

from pydantic import ValidationError

from biderive import (
    BiderMode,
    ModeUnavailableError,
    biderivation_space,
    derivation_space,
    inner_derivations,
    postlie_classify,
    radical_properties,
    symmetric_radical,
)
from chevalley import (
    BadCharacteristicError,
    DegenerateKillingError,
    RankOutOfRangeError,
    classical_algebra,
)
from exactla import InvalidDomainError, ScalarDomain
from formats import (
    FormatError,
    build_report,
    derivation_task,
    frame_block,
    load_algebra,
    postlie_task,
    radical_task,
    render_report,
    save_algebra,
    space_task,
    witt_task,
)
from liecore import LieAlgebra, validate
from literals import HYPOTHESIS_CHAR_ZERO, TOOL_NAME, TOOL_VERSION, DebugLevel, Status
from structured_config import SolverConfig, load_config
from utils import resolve_threads, safe_write_to_file
from verify import AcceptanceSuite
from witt import (
    CapsIncompatibleError,
    WittError,
    generator_vanishing_report,
    restricted_inner_tensor,
    truncated_biderivation_space,
    witt_truncation,
)

logger = logging.getLogger(__name__)

SOLVE_TASKS = ("der", "bider:sym", "bider:skew", "bider:full", "radical", "postlie")
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

Handler = Callable[[argparse.Namespace, SolverConfig, int], int]


def _set_status(key: Status, detail: str = "") -> int:
    """Logs the outcome at its level and returns its exit code."""
    log_level: DebugLevel = key.value.log_level
    message = key.value.message
    if detail:
        message = detail if detail.startswith(message) else f"{message}: {detail}"

    getattr(logger, log_level.lower())(message)
    return int(key.value.exit_code)


def _write(text: str, out: Optional[str]) -> None:
    if out:
        safe_write_to_file(text, out)
    else:
        sys.stdout.write(text)


def _elapsed_ms(start: float) -> int:
    return int((time.monotonic() - start) * 1000)


def cmd_build(args: argparse.Namespace, config: SolverConfig, threads: int) -> int:
    domain = ScalarDomain.from_spec(args.field)
    frame = classical_algebra(args.type, args.rank, domain)
    save_algebra(args.out, frame.algebra, frame_block(frame))
    logger.info(f"wrote {args.type}{args.rank} over {domain} (dim {frame.algebra.dim})")
    return _set_status(Status.OK)


def cmd_validate(args: argparse.Namespace, config: SolverConfig, threads: int) -> int:
    algebra = load_algebra(args.algebra).algebra
    report = validate(algebra)
    if not report.ok:
        first = report.failures[0]
        return _set_status(
            Status.INVALID_ALGEBRA,
            f"{len(report.failures)} Jacobi failures, first at ({first.i}, {first.j}, {first.k})",
        )

    sys.stdout.write(f"{algebra.fingerprint} dim {algebra.dim} over {algebra.domain}\n")
    return _set_status(Status.OK)


def _solve_task(
    L: LieAlgebra, task: str, args: argparse.Namespace, config: SolverConfig, threads: int
) -> Dict[str, Any]:
    if task == "der":
        inner, outer_dim = inner_derivations(L)
        return derivation_task(derivation_space(L), inner, outer_dim)
    if task.startswith("bider:"):
        mode = BiderMode(task.split(":", 1)[1])
        return space_task(task, biderivation_space(L, mode, threads))
    if task == "radical":
        result = symmetric_radical(L, threads=threads)
        return radical_task(result, radical_properties(L, result))

    report = postlie_classify(
        L,
        enumerate_over_field=not args.no_enumerate,
        enumeration_limit=config.enumeration_limit,
        grid_radius=config.rational_grid_radius,
        threads=threads,
    )
    return postlie_task(report)


def cmd_solve(args: argparse.Namespace, config: SolverConfig, threads: int) -> int:
    algebra = load_algebra(args.algebra).algebra
    report = validate(algebra)
    if not report.ok:
        return _set_status(Status.INVALID_ALGEBRA, f"{len(report.failures)} Jacobi failures")

    start = time.monotonic()
    task = _solve_task(algebra, args.task, args, config, threads)
    elapsed = _elapsed_ms(start)
    logger.info(f"{args.task} on {algebra!r} took {elapsed} ms")

    result = build_report(algebra.fingerprint, algebra.domain, [task], {args.task: elapsed})
    _write(render_report(result), args.out)
    return _set_status(Status.OK)


def cmd_witt(args: argparse.Namespace, config: SolverConfig, threads: int) -> int:
    W = witt_truncation(args.n, args.N, ScalarDomain.rational())
    mode = BiderMode(args.mode)

    start = time.monotonic()
    problem = truncated_biderivation_space(W, args.N_in, mode, threads)
    task = witt_task(problem, generator_vanishing_report(problem))
    if mode is BiderMode.SKEW:
        task["contains_inner"] = problem.contains(restricted_inner_tensor(W, args.N_in))
    elapsed = _elapsed_ms(start)

    window = {"n": args.n, "N": args.N, "N_in": args.N_in}
    result = build_report(W.fingerprint, W.domain, [task], {task["task"]: elapsed}, window)
    _write(render_report(result), args.out)
    return _set_status(Status.OK)


def cmd_verify(args: argparse.Namespace, config: SolverConfig, threads: int) -> int:
    suite = AcceptanceSuite(config, bless=args.bless, threads=threads)
    summary = suite.run(args.suite)
    sys.stdout.write(summary.to_text())
    if args.out:
        safe_write_to_file(summary.to_json(), args.out)

    if not summary.passed:
        failed = ", ".join(f"{r.name} [{r.anchor}]" for r in summary.failures)
        return _set_status(Status.CHECKS_FAILED, failed)
    if summary.unpinned:
        return _set_status(Status.UNPINNED_GOLDEN, ", ".join(r.name for r in summary.unpinned))
    return _set_status(Status.OK)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Derivations, biderivations and commutative post-Lie structures of Lie "
        "algebras over Q and F_p.",
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {TOOL_VERSION}")
    parser.add_argument("--config", help="alternative config.yaml")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--threads", type=int, help="worker threads, 0 for one per CPU")
    commands = parser.add_subparsers(dest="command", required=True)

    build = commands.add_parser("build", help="write a classical simple algebra")
    build.add_argument("type", choices=["A", "B", "C", "D"])
    build.add_argument("rank", type=int)
    build.add_argument("field", help="rational, prime:p, Fp or GFp")
    build.add_argument("-o", "--out", required=True)
    build.set_defaults(handler=cmd_build)

    check = commands.add_parser("validate", help="check the Jacobi identity of an algebra file")
    check.add_argument("algebra")
    check.set_defaults(handler=cmd_validate)

    solve = commands.add_parser("solve", help="solve one task on an algebra file")
    solve.add_argument("algebra")
    solve.add_argument("task", choices=SOLVE_TASKS)
    solve.add_argument("-o", "--out", help="report path, standard output when omitted")
    solve.add_argument(
        "--no-enumerate",
        action="store_true",
        help="emit the post-Lie system without searching parameter points",
    )
    solve.set_defaults(handler=cmd_solve)

    witt = commands.add_parser("witt", help="solve a truncated Witt window")
    witt.add_argument("n", type=int, help="number of variables")
    witt.add_argument("N", type=int, help="degree cap of the truncation")
    witt.add_argument("N_in", type=int, help="degree cap of the arguments")
    witt.add_argument("mode", choices=[mode.value for mode in BiderMode])
    witt.add_argument("-o", "--out", help="report path, standard output when omitted")
    witt.set_defaults(handler=cmd_witt)

    verify = commands.add_parser("verify", help="run the acceptance suite")
    verify.add_argument(
        "suite", nargs="?", default="all", choices=["classical", "witt", "postlie", "all"]
    )
    verify.add_argument("--max-rank", type=int)
    verify.add_argument("--fields", help="comma separated fields, e.g. Q,F5,F7")
    verify.add_argument("--windows", help="comma separated Witt windows n:N:N_in")
    verify.add_argument("--golden-dir")
    verify.add_argument("--bless", action="store_true", help="rewrite the golden reports")
    verify.add_argument("-o", "--out", help="machine-readable summary path")
    verify.set_defaults(handler=cmd_verify)
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "threads": args.threads,
        "log_level": args.log_level,
        "verify_max_rank": getattr(args, "max_rank", None),
        "verify_fields": getattr(args, "fields", None),
        "witt_windows": getattr(args, "windows", None),
        "golden_dir": getattr(args, "golden_dir", None),
    }


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        config = load_config(args.config, overrides=_overrides(args))
    except FileNotFoundError as e:
        return _set_status(Status.IO_ERROR, f"no config file at {e}")
    except ValidationError as e:
        return _set_status(Status.BAD_ARGUMENTS, str(e))

    logging.basicConfig(format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger().setLevel(config.log_level)
    threads = resolve_threads(config.threads)
    logger.debug(f"running {args.command} with {threads} threads")

    handler: Handler = args.handler
    try:
        return handler(args, config, threads)
    except OSError as e:
        return _set_status(Status.IO_ERROR, str(e))
    except FormatError as e:
        return _set_status(Status.INVALID_ALGEBRA, e.message)
    except RankOutOfRangeError as e:
        return _set_status(Status.RANK_OUT_OF_RANGE, e.message)
    except BadCharacteristicError as e:
        if HYPOTHESIS_CHAR_ZERO in e.message:
            return _set_status(Status.NOT_CHAR_ZERO, e.message)
        return _set_status(Status.BAD_CHARACTERISTIC, e.message)
    except DegenerateKillingError as e:
        return _set_status(Status.DEGENERATE_KILLING, e.message)
    except CapsIncompatibleError as e:
        return _set_status(Status.CAPS_INCOMPATIBLE, e.message)
    except ModeUnavailableError as e:
        return _set_status(Status.MODE_UNAVAILABLE, e.message)
    except (InvalidDomainError, WittError) as e:
        return _set_status(Status.BAD_ARGUMENTS, e.message)


if __name__ == "__main__":
    sys.exit(main())
