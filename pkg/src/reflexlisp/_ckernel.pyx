# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled evaluation kernel.

Line-for-line the algorithm of ``_kernel.py``; cons cells are read through
C-level tuple access.  The one difference: variable lookup is a plain walk
of the association list, which at C speed beats the Python kernel's
per-run lookup memo.  Keep the two files in step: the test suite runs
every evaluator test against both.
"""

from .errors import ErrorKind, EvalError
from .sexpr import (ATOM, CAR, CDR, COND, CONS, EQ, LABEL, LAMBDA, NIL, QUOTE, T,
                    Cons, Symbol, print_expr)
from ._kernel import MISSING

cdef enum Frame:
    F_DONE, F_ATOM, F_EQ1, F_EQ2, F_CAR, F_CDR, F_CONS1, F_CONS2, F_EVCON, F_EVLIS

cdef object _Cons = Cons
cdef object _Symbol = Symbol
cdef object _NIL = NIL
cdef object _T = T
cdef object _QUOTE = QUOTE, _ATOM = ATOM, _EQ = EQ, _CAR = CAR, _CDR = CDR
cdef object _CONS = CONS, _COND = COND, _LABEL = LABEL, _LAMBDA = LAMBDA
cdef object _MISSING = MISSING
cdef object _new = tuple.__new__


cdef inline object cons(object x, object y):
    return _new(_Cons, (x, y))


cdef inline object car(object x):
    return (<tuple>x)[0]


cdef inline object cdr(object x):
    return (<tuple>x)[1]


cdef inline bint is_cons(object x):
    return type(x) is _Cons


cdef object lookup(object x, object a):
    cdef object binding, rest, key
    if type(x) is _Symbol:
        while is_cons(a):
            binding = car(a)
            if is_cons(binding) and car(binding) is x:
                rest = cdr(binding)
                return car(rest) if is_cons(rest) else _NIL
            a = cdr(a)
        return _MISSING
    while is_cons(a):
        binding = car(a)
        if is_cons(binding):
            key = car(binding)
            if type(key) is type(x) and key == x:
                rest = cdr(binding)
                return car(rest) if is_cons(rest) else _NIL
        a = cdr(a)
    return _MISSING


cdef list operands(object e, int n, long step):
    cdef list out = []
    cdef object x = cdr(e)
    while is_cons(x):
        out.append(car(x))
        x = cdr(x)
    if x is not _NIL or len(out) != n:
        raise EvalError(ErrorKind.BAD_ARITY, e, step,
                        f"expected {n} operand{'s' if n != 1 else ''}")
    return out


cdef object bind(object params, object values, object a):
    cdef list pairs = []
    cdef Py_ssize_t i
    while is_cons(params) and is_cons(values):
        pairs.append(cons(car(params), cons(car(values), _NIL)))
        params = cdr(params)
        values = cdr(values)
    for i in range(len(pairs) - 1, -1, -1):
        a = cons(pairs[i], a)
    return a


cdef object start_clause(object clauses, object form, object a, list stack, long step):
    cdef object clause
    if clauses is _NIL:
        raise EvalError(ErrorKind.COND_FELL_THROUGH, form, step)
    if not is_cons(clauses):
        raise EvalError(ErrorKind.BAD_ARITY, form, step, "improper clause list")
    clause = car(clauses)
    if not is_cons(clause) or not is_cons(cdr(clause)) or cdr(cdr(clause)) is not _NIL:
        raise EvalError(ErrorKind.BAD_ARITY, form, step,
                        f"clause {print_expr(clause)} is not a (test body) pair")
    stack.append((F_EVCON, form, cdr(clauses), car(cdr(clause)), a))
    return car(clause)


def run(object e, object a, long max_depth, object on_enter=None, object on_exit=None):
    """Evaluate ``e`` in association list ``a``; see ``_kernel.run``."""
    cdef list stack = []
    cdef long depth = 0, entries = 0, step, n
    cdef object value = None, op, head, fn, arg, x, first, values
    cdef tuple frame
    cdef int kind
    cdef bint descending = True
    cdef list ops, done
    cdef Py_ssize_t i
    while True:
        if descending:
            if depth >= max_depth:
                raise EvalError(ErrorKind.DEPTH_EXCEEDED, e, entries,
                                f"max depth {max_depth}")
            step = entries
            entries += 1
            depth += 1
            if on_enter is not None:
                on_enter(e, a)
            stack.append((F_DONE, e, a, step))

            if not is_cons(e):
                value = lookup(e, a)
                if value is _MISSING:
                    if e is _NIL or e is _T or type(e) is int:
                        value = e
                    else:
                        raise EvalError(ErrorKind.UNBOUND_SYMBOL, e, step)
                descending = False
                continue

            op = car(e)
            if not is_cons(op):
                if op is _QUOTE:
                    value = operands(e, 1, step)[0]
                    descending = False
                elif op is _CAR or op is _CDR or op is _ATOM:
                    arg = operands(e, 1, step)[0]
                    stack.append((F_CAR if op is _CAR else F_CDR if op is _CDR else F_ATOM, e))
                    e = arg
                elif op is _EQ or op is _CONS:
                    ops = operands(e, 2, step)
                    stack.append((F_EQ1 if op is _EQ else F_CONS1, ops[1], a))
                    e = ops[0]
                elif op is _COND:
                    e = start_clause(cdr(e), e, a, stack, step)
                else:
                    fn = lookup(op, a)
                    if fn is _MISSING:
                        raise EvalError(ErrorKind.NOT_APPLICABLE, e, step,
                                        f"{print_expr(op)} is not bound")
                    e = cons(fn, cdr(e))
                continue

            head = car(op)
            if head is _LABEL:
                ops = operands(op, 2, step)
                a = cons(cons(ops[0], cons(op, _NIL)), a)
                e = cons(ops[1], cdr(e))
            elif head is _LAMBDA:
                ops = operands(op, 2, step)
                x = cdr(e)
                n = 0
                while is_cons(x):
                    n += 1
                    x = cdr(x)
                if x is not _NIL:
                    raise EvalError(ErrorKind.BAD_ARITY, e, step, "improper argument list")
                if n == 0:
                    a = bind(ops[0], _NIL, a)
                    e = ops[1]
                else:
                    x = cdr(e)
                    stack.append((F_EVLIS, cdr(x), [], ops[0], ops[1], a))
                    e = car(x)
            else:
                raise EvalError(ErrorKind.NOT_APPLICABLE, e, step,
                                f"{print_expr(op)} is not a label or lambda form")
            continue

        frame = <tuple>stack.pop()
        kind = frame[0]
        if kind == F_DONE:
            depth -= 1
            if on_exit is not None:
                on_exit(frame[1], frame[2], value)
            if not stack:
                return value
        elif kind == F_CAR or kind == F_CDR:
            if is_cons(value):
                value = car(value) if kind == F_CAR else cdr(value)
            elif value is not _NIL:
                raise EvalError(ErrorKind.CAR_OF_ATOM if kind == F_CAR else ErrorKind.CDR_OF_ATOM,
                                frame[1], (<tuple>stack[len(stack) - 1])[3],
                                f"operand is {print_expr(value)}")
        elif kind == F_ATOM:
            value = _NIL if is_cons(value) else _T
        elif kind == F_EQ1 or kind == F_CONS1:
            stack.append((F_EQ2 if kind == F_EQ1 else F_CONS2, value))
            e = frame[1]
            a = frame[2]
            descending = True
        elif kind == F_EQ2:
            first = frame[1]
            if is_cons(first) or is_cons(value):
                value = _NIL
            elif first is value or (type(first) is type(value) and first == value):
                value = _T
            else:
                value = _NIL
        elif kind == F_CONS2:
            value = cons(frame[1], value)
        elif kind == F_EVCON:
            if value is not _NIL:
                e = frame[3]
            else:
                e = start_clause(frame[2], frame[1], frame[4], stack,
                                 (<tuple>stack[len(stack) - 1])[3])
            a = frame[4]
            descending = True
        else:
            done = <list>frame[2]
            done.append(value)
            x = frame[1]
            if x is _NIL:
                values = _NIL
                for i in range(len(done) - 1, -1, -1):
                    values = cons(done[i], values)
                a = bind(frame[3], values, frame[5])
                e = frame[4]
            else:
                stack.append((F_EVLIS, cdr(x), done, frame[3], frame[4], frame[5]))
                e = car(x)
                a = frame[5]
            descending = True
