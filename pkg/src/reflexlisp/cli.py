"""Command-line front end.

    reflexlisp run PROGRAM [--env FILE] [--mode MODE] [--format human|lines]
                           [--max-depth N] [--trace-out FILE]
    reflexlisp verify PROGRAM EXPECTED [--env FILE] [--suffix]

Exit codes: 0 success, 1 evaluation error, 2 parse error, 3 configuration
error (unreadable files, malformed environment), 4 transcript mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, TextIO

from . import _backend
from .core import Env, Limits
from .errors import EvalError
from .reflexive import Mode, StepRecord, eval_reflexive
from .sexpr import ReadError, print_expr, read, read_all

EXIT_OK, EXIT_EVAL, EXIT_PARSE, EXIT_CONFIG, EXIT_MISMATCH = 0, 1, 2, 3, 4


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    program: Path
    env: Optional[Path] = None
    mode: Mode = Mode.STANDARD
    format: str = "human"
    max_depth: int = 10_000
    trace_out: Optional[Path] = None

    def __post_init__(self):
        if self.format not in ("human", "lines"):
            raise ConfigError(f"unknown format {self.format!r}")


def _read_text(path: Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def load_program(path: Path):
    """The single top-level expression in ``path``."""
    forms = read_all(_read_text(path))
    if len(forms) != 1:
        raise ReadError(f"{path}: expected exactly one expression, found {len(forms)}")
    return forms[0]


def load_env(path: Optional[Path]) -> Env:
    if path is None:
        return Env()
    try:
        forms = read_all(_read_text(path))
    except ReadError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if len(forms) != 1:
        raise ConfigError(f"{path}: expected one binding list, found {len(forms)} expressions")
    try:
        return Env.from_expr(forms[0])
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


# --- record formats -----------------------------------------------------------

def record_to_json(rec: StepRecord) -> dict:
    snap = rec.global_snapshot
    return {
        "index": rec.step_index,
        "input": print_expr(rec.input_expr),
        "env": print_expr(rec.input_env.expr),
        "output": print_expr(rec.output_expr),
        "mirror": None if rec.mirror_output is None else print_expr(rec.mirror_output),
        "emissions": [{"kind": em.kind.value, "payload": em.render()}
                      for em in rec.hook_emissions],
        "snapshot": None if snap is None else {
            "program": print_expr(snap.top_level_expr),
            "env": print_expr(snap.env_at_step.expr),
            "completed_steps": snap.completed_steps,
        },
        "hook_error": None if rec.hook_error is None else str(rec.hook_error),
    }


def render_human(obj: dict) -> str:
    """The human trace line for one lines-format record."""
    result = obj["mirror"] if obj["mirror"] is not None else obj["output"]
    return f"({obj['input']} {obj['env']}) -> {result}"


def format_record(rec: StepRecord, fmt: str) -> str:
    if fmt == "lines":
        return json.dumps(record_to_json(rec))
    return str(rec.line())


# --- commands -------------------------------------------------------------------

def run_file(config: RunConfig, stdout: TextIO = None, stderr: TextIO = None) -> int:
    """Evaluate a program file; the result is the last line on stdout."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        program = load_program(config.program)
    except ReadError as exc:
        print(f"parse error: {exc}", file=stderr)
        return EXIT_PARSE
    except ConfigError as exc:
        print(f"config error: {exc}", file=stderr)
        return EXIT_CONFIG
    try:
        env = load_env(config.env)
        limits = Limits(config.max_depth)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=stderr)
        return EXIT_CONFIG

    error = None
    try:
        value, trace = eval_reflexive(program, env, config.mode, limits=limits)
    except EvalError as exc:
        error, value, trace = exc, None, exc.trace

    if trace:
        out = config.trace_out.open("w", encoding="utf-8") if config.trace_out else stdout
        try:
            for rec in trace:
                print(format_record(rec, config.format), file=out)
        finally:
            if config.trace_out:
                out.close()
    if error is not None:
        print(f"error: {error}", file=stderr)
        return EXIT_EVAL
    print(print_expr(value), file=stdout)
    return EXIT_OK


def _normalize_line(line: str) -> str:
    # Expected files may use any spacing, case or quote sugar.
    head, sep, tail = line.rpartition(" -> ")
    if not sep:
        return line.strip()
    try:
        return f"{print_expr(read(head))} -> {print_expr(read(tail))}"
    except ReadError:
        return line.strip()


@dataclass
class VerifyReport:
    passed: bool
    checked: int
    divergence: Optional[int] = None
    expected: Optional[str] = None
    actual: Optional[str] = None

    def __str__(self) -> str:
        if self.passed:
            return f"PASS: {self.checked} trace lines match"
        return (f"FAIL at step {self.divergence}\n"
                f"  expected: {self.expected}\n  actual:   {self.actual}")


def read_expected(text: str) -> list:
    """Non-blank, non-comment lines of a golden transcript."""
    return [_normalize_line(ln) for ln in text.splitlines()
            if ln.strip() and not ln.lstrip().startswith(";")]


def verify_transcript(program, env, expected: list, limits: Limits = Limits(),
                      suffix: bool = False) -> VerifyReport:
    """Run in REFLEXION mode and compare trace lines to ``expected``.

    With ``suffix`` the expected lines are matched against the end of the
    trace.  Divergence indices are absolute step indices.
    """
    _, trace = eval_reflexive(program, env, Mode.REFLEXION, limits=limits)
    actual = trace.lines()
    offset = len(actual) - len(expected) if suffix else 0
    if offset < 0:
        offset = 0
    for i, want in enumerate(expected):
        k = offset + i
        got = actual[k] if k < len(actual) else "<end of trace>"
        if got != want:
            return VerifyReport(False, i, k, want, got)
    if not suffix and len(actual) > len(expected):
        k = len(expected)
        return VerifyReport(False, k, k, "<end of transcript>", actual[k])
    return VerifyReport(True, len(expected))


def _verify_command(args, stdout, stderr) -> int:
    try:
        program = load_program(Path(args.program))
    except ReadError as exc:
        print(f"parse error: {exc}", file=stderr)
        return EXIT_PARSE
    try:
        env = load_env(Path(args.env) if args.env else None)
        expected = read_expected(_read_text(Path(args.expected)))
        limits = Limits(args.max_depth)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=stderr)
        return EXIT_CONFIG
    try:
        report = verify_transcript(program, env, expected, limits, args.suffix)
    except EvalError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_EVAL
    print(report, file=stdout)
    return EXIT_OK if report.passed else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reflexlisp",
        description="Evaluate Lisp-in-Lisp programs with a traceable, reflexive loop.")
    parser.add_argument("--backend", choices=sorted(_backend.BACKENDS),
                        help="evaluation kernel (default: %s)" % _backend.name)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="evaluate a program file")
    run.add_argument("program")
    run.add_argument("--env", help="file holding the environment as a list of (name value) pairs")
    run.add_argument("--mode", default="standard", choices=[m.name.lower() for m in Mode])
    run.add_argument("--format", default="human", choices=["human", "lines"])
    run.add_argument("--max-depth", type=int, default=10_000)
    run.add_argument("--trace-out", help="write trace records here instead of stdout")

    verify = sub.add_parser("verify", help="compare a REFLEXION trace with a golden transcript")
    verify.add_argument("program")
    verify.add_argument("expected")
    verify.add_argument("--env")
    verify.add_argument("--max-depth", type=int, default=10_000)
    verify.add_argument("--suffix", action="store_true",
                        help="match the transcript against the last trace lines only")
    return parser


def main(argv=None, stdout: TextIO = None, stderr: TextIO = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    if args.backend:
        _backend.use(args.backend)
    if args.command == "verify":
        return _verify_command(args, stdout, stderr)
    try:
        config = RunConfig(
            program=Path(args.program),
            env=Path(args.env) if args.env else None,
            mode=Mode.parse(args.mode),
            format=args.format,
            max_depth=args.max_depth,
            trace_out=Path(args.trace_out) if args.trace_out else None,
        )
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=stderr)
        return EXIT_CONFIG
    return run_file(config, stdout, stderr)


if __name__ == "__main__":
    sys.exit(main())
