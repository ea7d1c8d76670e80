"""Evaluation errors shared by both evaluation kernels."""

from __future__ import annotations

import enum


class ErrorKind(enum.Enum):
    UNBOUND_SYMBOL = "UnboundSymbol"
    NOT_APPLICABLE = "NotApplicable"
    BAD_ARITY = "BadArity"
    CAR_OF_ATOM = "CarOfAtom"
    CDR_OF_ATOM = "CdrOfAtom"
    COND_FELL_THROUGH = "CondFellThrough"
    DEPTH_EXCEEDED = "DepthExceeded"


class EvalError(Exception):
    """The object program failed.

    ``expr`` is the expression that triggered the failure and ``step`` the
    0-based entry index of the eval occurrence that failed.  When raised
    from the reflexive evaluator, ``trace`` holds the records completed
    before the failure.
    """

    def __init__(self, kind: ErrorKind, expr, step: int = -1, detail: str = ""):
        self.kind = kind
        self.expr = expr
        self.step = step
        self.detail = detail
        self.trace = None
        super().__init__(kind, expr, step)

    def __str__(self) -> str:
        from .sexpr import print_expr

        text = f"{self.kind.value}: {print_expr(self.expr)}"
        if self.detail:
            text += f" ({self.detail})"
        if self.step >= 0:
            text += f" at step {self.step}"
        return text
