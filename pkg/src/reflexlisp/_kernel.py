"""Pure-Python evaluation kernel.

Same algorithm as ``_ckernel.pyx``; this copy is used when the compiled
extension is unavailable.  The evaluator keeps its continuation on an
explicit stack, so object-level recursion never consumes host stack.

Every call of the evaluator on a (subexpression, environment) pair is one
*occurrence*.  An occurrence pushes a ``_DONE`` frame on entry; popping that
frame marks its completion.  Tail positions (operator lookup, ``label``,
``lambda`` bodies, ``cond`` bodies) still start a new occurrence, so the
number of occurrences equals the number of calls the recursive definition
makes.
"""

from .errors import ErrorKind, EvalError
from .sexpr import (ATOM, CAR, CDR, COND, CONS, EQ, LABEL, LAMBDA, NIL, QUOTE, T,
                    Cons, Symbol, print_expr)

_DONE, _ATOM, _EQ1, _EQ2, _CAR, _CDR, _CONS1, _CONS2, _EVCON, _EVLIS = range(10)

MISSING = object()

# Building cells with tuple.__new__ skips the namedtuple constructor; the
# hot loop also reads fields by index ([0] is car, [1] is cdr).
_new = tuple.__new__


def lookup(x, a):
    """First binding of ``x`` in the association list ``a``, else MISSING."""
    # Cons cells are 2-tuples; indexing beats the named accessors here.
    if type(x) is Symbol:
        # Symbols are interned.  The unchecked walk assumes well-formed
        # bindings; anything else fails with TypeError/IndexError before it
        # can produce a false hit, and the checked loop takes over from there.
        try:
            while a is not NIL:
                binding = a[0]
                if binding[0] is x:
                    rest = binding[1]
                    return rest[0] if type(rest) is Cons else NIL
                a = a[1]
            return MISSING
        except (TypeError, IndexError):
            pass
    while type(a) is Cons:
        binding = a[0]
        if type(binding) is Cons:
            key = binding[0]
            if key is x or (type(key) is type(x) and key == x):
                rest = binding[1]
                return rest[0] if type(rest) is Cons else NIL
        a = a[1]
    return MISSING


def _lookup_memo(x, a, memo):
    """:func:`lookup` with a per-run memo keyed by environment cell.

    Environments share tails, so most walks reach a cell some earlier walk
    already passed.  Every cell a miss walks over gets the same answer.
    Entries hold the cell itself, which keeps its id from being reused.
    """
    cells = memo.get(x)
    if cells is None:
        cells = memo[x] = {}
    path = []
    result = MISSING
    while type(a) is Cons:
        hit = cells.get(id(a))
        if hit is not None:
            result = hit[1]
            break
        path.append(a)
        binding = a[0]
        if type(binding) is Cons:
            key = binding[0]
            if key is x or (type(key) is type(x) and key == x):
                rest = binding[1]
                result = rest[0] if type(rest) is Cons else NIL
                break
        a = a[1]
    for cell in path:
        cells[id(cell)] = (cell, result)
    return result


def _operands(e, n, step):
    """The ``n`` operands of form ``e``, or BadArity."""
    out = []
    x = e[1]
    while type(x) is Cons:
        out.append(x[0])
        x = x[1]
    if x is not NIL or len(out) != n:
        raise EvalError(ErrorKind.BAD_ARITY, e, step,
                        f"expected {n} operand{'s' if n != 1 else ''}")
    return out


def _bind(params, values, a):
    """``append.(pair.(params, values), a)`` without host recursion."""
    pairs = []
    while type(params) is Cons and type(values) is Cons:
        pairs.append(_new(Cons, (params[0], _new(Cons, (values[0], NIL)))))
        params = params[1]
        values = values[1]
    for p in reversed(pairs):
        a = _new(Cons, (p, a))
    return a


def _start_clause(clauses, form, a, stack, step):
    if clauses is NIL:
        raise EvalError(ErrorKind.COND_FELL_THROUGH, form, step)
    if type(clauses) is not Cons:
        raise EvalError(ErrorKind.BAD_ARITY, form, step, "improper clause list")
    clause = clauses.car
    if (type(clause) is not Cons or type(clause.cdr) is not Cons
            or clause.cdr.cdr is not NIL):
        raise EvalError(ErrorKind.BAD_ARITY, form, step,
                        f"clause {print_expr(clause)} is not a (test body) pair")
    stack.append((_EVCON, form, clauses.cdr, clause.cdr.car, a))
    return clause.car


def run(e, a, max_depth, on_enter=None, on_exit=None):
    """Evaluate ``e`` in association list ``a``.

    ``on_enter(e, a)`` runs when an occurrence starts; ``on_exit(e, a,
    value)`` when it completes, in post-order.  Raises EvalError.
    """
    stack = []
    memo = {}
    depth = 0
    entries = 0
    value = None
    descending = True
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
            stack.append((_DONE, e, a, step))

            if type(e) is not Cons:
                value = _lookup_memo(e, a, memo)
                if value is MISSING:
                    if e is NIL or e is T or type(e) is int:
                        value = e
                    else:
                        raise EvalError(ErrorKind.UNBOUND_SYMBOL, e, step)
                descending = False
                continue

            op = e[0]
            if type(op) is not Cons:
                if op is QUOTE:
                    value = _operands(e, 1, step)[0]
                    descending = False
                elif op is CAR or op is CDR or op is ATOM:
                    arg = _operands(e, 1, step)[0]
                    stack.append((_CAR if op is CAR else _CDR if op is CDR else _ATOM, e))
                    e = arg
                elif op is EQ or op is CONS:
                    first, second = _operands(e, 2, step)
                    stack.append((_EQ1 if op is EQ else _CONS1, second, a))
                    e = first
                elif op is COND:
                    e = _start_clause(e[1], e, a, stack, step)
                else:
                    fn = _lookup_memo(op, a, memo)
                    if fn is MISSING:
                        raise EvalError(ErrorKind.NOT_APPLICABLE, e, step,
                                        f"{print_expr(op)} is not bound")
                    e = _new(Cons, (fn, e[1]))
                continue

            head = op[0]
            if head is LABEL:
                name, fn = _operands(op, 2, step)
                a = _new(Cons, (_new(Cons, (name, _new(Cons, (op, NIL)))), a))
                e = _new(Cons, (fn, e[1]))
            elif head is LAMBDA:
                params, body = _operands(op, 2, step)
                args = e[1]
                n = 0
                x = args
                while type(x) is Cons:
                    n += 1
                    x = x[1]
                if x is not NIL:
                    raise EvalError(ErrorKind.BAD_ARITY, e, step, "improper argument list")
                if n == 0:
                    a = _bind(params, NIL, a)
                    e = body
                else:
                    stack.append((_EVLIS, args[1], [], params, body, a))
                    e = args[0]
            else:
                raise EvalError(ErrorKind.NOT_APPLICABLE, e, step,
                                f"{print_expr(op)} is not a label or lambda form")
            continue

        # Ascending: deliver ``value`` to the top continuation frame.
        frame = stack.pop()
        kind = frame[0]
        if kind == _DONE:
            depth -= 1
            if on_exit is not None:
                on_exit(frame[1], frame[2], value)
            if not stack:
                return value
        elif kind == _CAR or kind == _CDR:
            if type(value) is Cons:
                value = value[0] if kind == _CAR else value[1]
            elif value is not NIL:
                raise EvalError(ErrorKind.CAR_OF_ATOM if kind == _CAR else ErrorKind.CDR_OF_ATOM,
                                frame[1], stack[-1][3], f"operand is {print_expr(value)}")
        elif kind == _ATOM:
            value = NIL if type(value) is Cons else T
        elif kind == _EQ1 or kind == _CONS1:
            stack.append((_EQ2 if kind == _EQ1 else _CONS2, value))
            e = frame[1]
            a = frame[2]
            descending = True
        elif kind == _EQ2:
            first = frame[1]
            if type(first) is Cons or type(value) is Cons:
                value = NIL
            else:
                value = T if (first is value or (type(first) is type(value) and first == value)) else NIL
        elif kind == _CONS2:
            value = _new(Cons, (frame[1], value))
        elif kind == _EVCON:
            if value is not NIL:
                e = frame[3]
            else:
                e = _start_clause(frame[2], frame[1], frame[4], stack, stack[-1][3])
            a = frame[4]
            descending = True
        else:  # _EVLIS
            rest, done, params, body, env = frame[1], frame[2], frame[3], frame[4], frame[5]
            done.append(value)
            if rest is NIL:
                values = NIL
                for v in reversed(done):
                    values = _new(Cons, (v, values))
                a = _bind(params, values, env)
                e = body
            else:
                stack.append((_EVLIS, rest[1], done, params, body, env))
                e = rest[0]
                a = env
            descending = True
