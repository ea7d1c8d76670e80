"""A Lisp-in-Lisp evaluator with a self-observing interpretation loop."""

from .core import Env, Limits, StepCounter, eval_core
from .errors import ErrorKind, EvalError
from .reflexive import (Emission, EmissionKind, Mode, ProgramSnapshot, StepRecord, Trace,
                        builtin_mirror_hook, eval_reflexive)
from .sexpr import NIL, T, Cons, ReadError, Symbol, print_expr, read, read_all

__version__ = "0.1.0"

__all__ = [
    "Cons", "Emission", "EmissionKind", "Env", "ErrorKind", "EvalError", "Limits",
    "Mode", "NIL", "ProgramSnapshot", "ReadError", "StepCounter", "StepRecord",
    "Symbol", "T", "Trace", "builtin_mirror_hook", "eval_core", "eval_reflexive",
    "print_expr", "read", "read_all",
]
