"""The enriched interpretation loop.

Each completed eval occurrence becomes a :class:`StepRecord`.  How much of
the record is filled in depends on the :class:`Mode`:

=============  ===========================================================
STANDARD       plain evaluation, nothing recorded
TRACING        code and environment of the step, plus its result
MIRRORING      ... plus the step re-executed by the core evaluator
AUGMENTATION   ... plus the emissions of a hook run after every step
REFLEXION      ... plus a snapshot of the whole program at that step
=============  ===========================================================

Records are produced in post-order: a step is recorded once its value is
known, so the records of its subexpressions come first.  No mode can change
the value the program computes; the hook only ever adds emissions.
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional

from . import _backend
from .core import DEFAULT_LIMITS, Env, Limits, eval_core, list2
from .errors import EvalError
from .sexpr import print_expr

__all__ = [
    "Mode", "EmissionKind", "Emission", "TraceLine", "ProgramSnapshot",
    "StepRecord", "Trace", "Hook", "HookFailure", "MirrorDivergence", "RunState",
    "eval_reflexive", "local_introspect", "mirror_step", "global_introspect",
    "augment", "builtin_mirror_hook",
]


class Mode(enum.IntEnum):
    STANDARD = 0
    TRACING = 1
    MIRRORING = 2
    AUGMENTATION = 3
    REFLEXION = 4

    @property
    def components(self) -> tuple:
        """The step components this mode runs, in loop order."""
        return _COMPONENTS[self]

    @classmethod
    def parse(cls, name: str) -> "Mode":
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValueError(f"unknown mode {name!r}") from None


_COMPONENTS = {
    Mode.STANDARD: ("lower-step",),
    Mode.TRACING: ("lower-step", "local-introspection"),
    Mode.MIRRORING: ("lower-step", "local-introspection", "single-upper-step"),
    Mode.AUGMENTATION: ("lower-step", "local-introspection", "double-upper-step"),
    Mode.REFLEXION: ("lower-step", "double-introspection", "double-upper-step"),
}


class EmissionKind(enum.Enum):
    TRACE_LINE = "trace_line"
    MIRROR_RESULT = "mirror_result"
    CUSTOM = "custom"


@dataclass(frozen=True)
class TraceLine:
    """``(input env) -> result``, rendered on demand.

    Lines for deep recursions carry large environments; keeping the parts
    and printing lazily avoids building text nobody reads.
    """

    input_expr: object
    input_env: Env
    result: object

    @property
    def text(self) -> str:
        return f"{print_expr(list2(self.input_expr, self.input_env.expr))} -> {print_expr(self.result)}"

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class Emission:
    kind: EmissionKind
    payload: object  # an expression, a string, or a TraceLine

    def render(self) -> str:
        p = self.payload
        if isinstance(p, (str, TraceLine)):
            return str(p)
        return print_expr(p)


@dataclass(frozen=True)
class ProgramSnapshot:
    top_level_expr: object
    env_at_step: Env
    completed_steps: int


class HookFailure(Exception):
    """A hook raised; the step's record is kept and carries this error."""

    def __init__(self, step_index: int, cause: BaseException):
        super().__init__(f"hook failed at step {step_index}: {cause!r}")
        self.step_index = step_index
        self.cause = cause


class MirrorDivergence(RuntimeError):
    """Re-executing a step gave a different outcome than the step itself."""


@dataclass(frozen=True, eq=True)
class StepRecord:
    step_index: int
    input_expr: object
    input_env: Env
    output_expr: object
    mirror_output: object = None
    hook_emissions: tuple = ()
    global_snapshot: Optional[ProgramSnapshot] = None
    hook_error: Optional[HookFailure] = field(default=None, compare=False)

    def project(self, mode: Mode) -> "StepRecord":
        """This record with the fields ``mode`` would not fill cleared."""
        return StepRecord(
            self.step_index, self.input_expr, self.input_env, self.output_expr,
            self.mirror_output if mode >= Mode.MIRRORING else None,
            self.hook_emissions if mode >= Mode.AUGMENTATION else (),
            self.global_snapshot if mode >= Mode.REFLEXION else None,
            self.hook_error if mode >= Mode.AUGMENTATION else None,
        )

    def line(self) -> TraceLine:
        result = self.output_expr if self.mirror_output is None else self.mirror_output
        return TraceLine(self.input_expr, self.input_env, result)


class Trace(Sequence):
    """Append-only sequence of step records, indexed from 0."""

    def __init__(self):
        self._records: list = []

    def __getitem__(self, i):
        return self._records[i]

    def __len__(self) -> int:
        return len(self._records)

    def __repr__(self) -> str:
        return f"<Trace of {len(self._records)} steps>"

    @property
    def hook_failures(self) -> list:
        return [r.hook_error for r in self._records if r.hook_error is not None]

    def project(self, mode: Mode) -> list:
        return [r.project(mode) for r in self._records]

    def lines(self) -> list:
        return [str(r.line()) for r in self._records]

    def _append(self, record: StepRecord) -> None:
        if record.step_index != len(self._records):
            raise ValueError("step indices must be consecutive")
        self._records.append(record)

    def _seal_last(self, record: StepRecord) -> None:
        # Only augment() calls this, to attach the hook's emissions to the
        # record the hook was just shown.
        self._records[-1] = record


Hook = Callable[[Trace], Iterable[Emission]]


@dataclass
class RunState:
    """What global introspection can see while a run is in progress."""

    top_level_expr: object
    trace: Trace
    env: Env = field(default_factory=Env)


def local_introspect(current, a):
    """The code of the step under execution and its environment, as data."""
    return current, (a if isinstance(a, Env) else Env(a))


def _remirror(expr, env: Env, output, limits: Limits):
    try:
        again = eval_core(expr, env, limits)
    except EvalError as exc:
        raise MirrorDivergence(
            f"re-executing {print_expr(expr)} failed ({exc}) but the step returned "
            f"{print_expr(output)}") from exc
    if again != output:
        raise MirrorDivergence(
            f"re-executing {print_expr(expr)} gave {print_expr(again)}, "
            f"the step gave {print_expr(output)}")
    return again


def mirror_step(record: StepRecord, limits: Limits = DEFAULT_LIMITS):
    """Execute the recorded step again with the core evaluator.

    The core evaluator is used, not the reflexive one: mirroring the mirror
    would never terminate.
    """
    return _remirror(record.input_expr, record.input_env, record.output_expr, limits)


def global_introspect(state: RunState) -> ProgramSnapshot:
    return ProgramSnapshot(state.top_level_expr, state.env, len(state.trace))


def augment(input, output, hook: Hook, trace: Trace, *, mirror=None,
            snapshot: ProgramSnapshot | None = None) -> Trace:
    """Record one completed step, then run ``hook`` over the whole trace.

    The hook sees the new record in last position.  Its emissions are
    attached to that record; if it raises, the record is kept and carries a
    :class:`HookFailure` instead.
    """
    expr, env = input
    record = StepRecord(len(trace), expr, env, output, mirror, (), snapshot)
    trace._append(record)
    try:
        emissions = tuple(hook(trace))
        error = None
    except Exception as exc:
        emissions = ()
        error = HookFailure(record.step_index, exc)
    if emissions or error is not None:
        trace._seal_last(replace(record, hook_emissions=emissions, hook_error=error))
    return trace


def builtin_mirror_hook(limits: Limits = DEFAULT_LIMITS) -> Hook:
    """The default hook: re-execute the current step and print it.

    Emits one TRACE_LINE ``(input env) -> result`` and one MIRROR_RESULT.
    When the loop has already mirrored the step, that result is reused
    rather than computed a third time.
    """

    def hook(trace: Trace):
        rec = trace[-1]
        result = rec.mirror_output
        if result is None:
            result = mirror_step(rec, limits)
        return (
            Emission(EmissionKind.TRACE_LINE, TraceLine(rec.input_expr, rec.input_env, result)),
            Emission(EmissionKind.MIRROR_RESULT, result),
        )

    return hook


def eval_reflexive(e, a=None, mode: Mode = Mode.REFLEXION, hook: Hook | None = None,
                   limits: Limits = DEFAULT_LIMITS):
    """Evaluate ``e`` in ``a`` through the loop variant ``mode``.

    Returns ``(value, trace)``.  On failure the EvalError is re-raised with
    the partial trace in its ``trace`` attribute.  In AUGMENTATION and
    REFLEXION a missing hook means :func:`builtin_mirror_hook`; passing a
    hook to a lower mode is an error.
    """
    mode = Mode(mode)
    env = a if isinstance(a, Env) else Env() if a is None else Env(a)
    trace = Trace()
    if hook is not None and mode < Mode.AUGMENTATION:
        raise ValueError(f"{mode.name} does not run hooks")
    if mode >= Mode.AUGMENTATION and hook is None:
        hook = builtin_mirror_hook(limits)

    if mode is Mode.STANDARD:
        try:
            return eval_core(e, env, limits), trace
        except EvalError as exc:
            exc.trace = trace
            raise

    state = RunState(e, trace, env)
    mirroring = mode >= Mode.MIRRORING
    reflexion = mode is Mode.REFLEXION

    def on_exit(expr, env_expr, output):
        expr, step_env = local_introspect(expr, env_expr)
        mirror = _remirror(expr, step_env, output, limits) if mirroring else None
        snapshot = None
        if reflexion:
            state.env = step_env
            snapshot = global_introspect(state)
        if hook is None:
            trace._append(StepRecord(len(trace), expr, step_env, output, mirror))
        else:
            augment((expr, step_env), output, hook, trace, mirror=mirror, snapshot=snapshot)

    try:
        value = _backend.run(e, env.expr, limits.max_depth, None, on_exit)
    except EvalError as exc:
        exc.trace = trace
        raise
    return value, trace
