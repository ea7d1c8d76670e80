"""The core evaluator: ``eval.`` over seven primitives plus label/lambda.

Environments are association lists, exactly the list-of-pairs shape an
object program would see.  ``eval_core`` delegates to the selected kernel
(see ``_backend``); the helper functions below are the small list
utilities the evaluator is defined in terms of, exposed for testing and for
programs that want them as host functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from . import _backend
from ._kernel import MISSING, lookup
from .errors import ErrorKind, EvalError
from .sexpr import COND, NIL, T, Cons, Symbol, is_atom, make_list, print_expr

__all__ = [
    "Env", "Limits", "StepCounter", "eval_core", "evcon", "evlis",
    "assoc_", "pair_", "append_", "list2", "null_", "and_", "not_",
]


@dataclass(frozen=True)
class Limits:
    max_depth: int = 10_000

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be positive")


DEFAULT_LIMITS = Limits()


class Env:
    """An association-list environment.

    Wraps the list-of-two-element-lists expression itself, so converting to
    and from an expression is free and snapshots share structure.
    """

    __slots__ = ("expr",)

    def __init__(self, expr=NIL):
        self.expr = expr

    @classmethod
    def from_expr(cls, expr) -> "Env":
        """Validate ``expr`` as a list of ``(symbol value)`` pairs."""
        x = expr
        while type(x) is Cons:
            b = x.car
            if (type(b) is not Cons or type(b.car) is not Symbol
                    or type(b.cdr) is not Cons or b.cdr.cdr is not NIL):
                raise ValueError(f"not a (symbol value) binding: {print_expr(b)}")
            x = x.cdr
        if x is not NIL:
            raise ValueError("environment is not a proper list")
        return cls(expr)

    @classmethod
    def from_pairs(cls, pairs: Iterable) -> "Env":
        return cls(make_list(list2(Symbol(k) if isinstance(k, str) else k, v)
                             for k, v in pairs))

    def to_expr(self):
        return self.expr

    def bind(self, name, value) -> "Env":
        return Env(Cons(list2(name, value), self.expr))

    def lookup(self, name):
        """Value of the first binding of ``name``; KeyError when unbound."""
        value = lookup(name, self.expr)
        if value is MISSING:
            raise KeyError(name)
        return value

    def __contains__(self, name) -> bool:
        return lookup(name, self.expr) is not MISSING

    def __iter__(self) -> Iterator[tuple]:
        x = self.expr
        while type(x) is Cons:
            b = x.car
            yield b.car, b.cdr.car
            x = x.cdr

    def __len__(self) -> int:
        return sum(1 for _ in self)

    def __eq__(self, other):
        if not isinstance(other, Env):
            return NotImplemented
        return self.expr == other.expr

    def __hash__(self):
        return hash(self.expr)

    def __repr__(self) -> str:
        return f"Env({print_expr(self.expr)})"


def _env_expr(a):
    return a.expr if isinstance(a, Env) else a


class StepCounter:
    """Counts eval occurrences as they start; pass as ``counter=``."""

    __slots__ = ("count",)

    def __init__(self):
        self.count = 0

    def __call__(self, e, a):
        self.count += 1


def eval_core(e, a=NIL, limits: Limits = DEFAULT_LIMITS, counter: StepCounter | None = None):
    """Evaluate ``e`` in environment ``a`` (an Env or an association list)."""
    return _backend.run(e, _env_expr(a), limits.max_depth, counter)


def evcon(clauses, a=NIL, limits: Limits = DEFAULT_LIMITS):
    """Evaluate the body of the first clause whose test is non-NIL."""
    return eval_core(Cons(COND, clauses), a, limits)


def evlis(m, a=NIL, limits: Limits = DEFAULT_LIMITS):
    """Evaluate each element of ``m``, returning the list of values."""
    values = []
    x = m
    while type(x) is Cons:
        values.append(eval_core(x.car, a, limits))
        x = x.cdr
    if x is not NIL:
        raise EvalError(ErrorKind.BAD_ARITY, m, -1, "improper argument list")
    return make_list(values)


# The list helpers keep the recursive definitions' results, but loop instead
# of recursing.

def null_(x):
    return T if x is NIL else NIL


def and_(x, y):
    # Both arguments are already evaluated: this is a function, not a form.
    return T if x is not NIL and y is not NIL else NIL


def not_(x):
    return T if x is NIL else NIL


def list2(x, y):
    return Cons(x, Cons(y, NIL))


def append_(x, y):
    items = []
    while not is_atom(x):
        items.append(x.car)
        x = x.cdr
    return make_list(items, y)


def pair_(x, y):
    """Zip two lists into ``(x_i y_i)`` pairs, built with :func:`list2`.

    Unequal lengths give the zipped prefix: the recursive definition's cond
    falls through to NIL once one side runs out.
    """
    pairs = []
    while not is_atom(x) and not is_atom(y):
        pairs.append(list2(x.car, y.car))
        x, y = x.cdr, y.cdr
    return make_list(pairs)


def assoc_(x, y):
    """Value bound to ``x`` in association list ``y``, NIL when absent."""
    value = lookup(x, y)
    return NIL if value is MISSING else value
