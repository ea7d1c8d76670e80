"""S-expression values, reader and printer.

Values are symbols (interned, upper-case), Python ints, and immutable cons
cells.  The empty list and the symbol ``NIL`` are the same object.

Reading works on UTF-8 bytes so that :class:`SourceSpan` offsets are byte
offsets.  Both the reader and the printer use explicit stacks, so nesting
depth is bounded by memory rather than by the host recursion limit.
"""

from __future__ import annotations

import re
from collections import namedtuple
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

__all__ = [
    "Symbol", "Cons", "Expr", "NIL", "T", "QUOTE", "ATOM", "EQ", "CAR", "CDR",
    "CONS", "COND", "LABEL", "LAMBDA", "SourceSpan", "ReadError",
    "is_atom", "make_list", "iter_list", "list_length",
    "read", "read_all", "read_spans", "print_expr",
]

_INT_RE = re.compile(r"[+-]?[0-9]+\Z")
_SYMBOL_CHARS = frozenset(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-+*/.<>=?!"
)


class Symbol(str):
    """An interned, upper-case symbol.

    ``Symbol("car") is Symbol("CAR")`` holds, so the evaluator can compare
    symbols by identity.
    """

    __slots__ = ()
    _table: dict = {}

    def __new__(cls, name: str) -> "Symbol":
        key = name.upper()
        sym = cls._table.get(key)
        if sym is None:
            if not key or key == "." or not _SYMBOL_CHARS.issuperset(key):
                raise ValueError(f"invalid symbol name: {name!r}")
            if key[0].isdigit() or _INT_RE.match(key):
                raise ValueError(f"symbol name reads as a number: {name!r}")
            sym = str.__new__(cls, key)
            cls._table[key] = sym
        return sym

    def __repr__(self) -> str:
        return f"Symbol({str.__str__(self)!r})"

    def __reduce__(self):
        return (Symbol, (str(self),))


class Cons(namedtuple("_ConsCell", "car cdr")):
    """An immutable cons cell.

    Equality and hashing are structural and iterative.  A cons never
    compares equal to a plain tuple.
    """

    __slots__ = ()

    # Returning NotImplemented would let tuple's reflected comparison
    # declare Cons(a, b) equal to (a, b).
    def __eq__(self, other):
        return type(other) is Cons and _equal(self, other)

    def __ne__(self, other):
        return type(other) is not Cons or not _equal(self, other)

    def __hash__(self):
        h = 0x345678
        stack = [self]
        while stack:
            x = stack.pop()
            if type(x) is Cons:
                h = (h * 1000003) ^ 0x2F
                stack.append(x.cdr)
                stack.append(x.car)
            else:
                h = (h * 1000003) ^ hash(x)
            h &= 0xFFFFFFFFFFFFFFFF
        return h

    def __repr__(self) -> str:
        return f"Cons<{print_expr(self)}>"

    def __str__(self) -> str:
        return print_expr(self)


Expr = Union[Symbol, int, Cons]

NIL = Symbol("NIL")
T = Symbol("T")
QUOTE = Symbol("QUOTE")
ATOM = Symbol("ATOM")
EQ = Symbol("EQ")
CAR = Symbol("CAR")
CDR = Symbol("CDR")
CONS = Symbol("CONS")
COND = Symbol("COND")
LABEL = Symbol("LABEL")
LAMBDA = Symbol("LAMBDA")


def _equal(x, y) -> bool:
    stack = [(x, y)]
    while stack:
        a, b = stack.pop()
        if a is b:
            continue
        ta, tb = type(a), type(b)
        if ta is Cons:
            if tb is not Cons:
                return False
            stack.append((a.cdr, b.cdr))
            stack.append((a.car, b.car))
        elif tb is Cons or ta is not tb or a != b:
            return False
    return True


def is_atom(x) -> bool:
    return type(x) is not Cons


def make_list(items: Iterable, tail=NIL):
    """Build a list from ``items``, ending in ``tail``."""
    result = tail
    for item in reversed(list(items)):
        result = Cons(item, result)
    return result


def iter_list(x) -> Iterator:
    """Yield the elements of a proper list; raise ValueError on a dotted tail."""
    while type(x) is Cons:
        yield x.car
        x = x.cdr
    if x is not NIL:
        raise ValueError(f"improper list tail: {print_expr(x)}")


def list_length(x) -> int:
    """Length of a proper list, or -1 when ``x`` is not one."""
    n = 0
    while type(x) is Cons:
        n += 1
        x = x.cdr
    return n if x is NIL else -1


# --- reader -----------------------------------------------------------------

@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int

    def __post_init__(self):
        if not 0 <= self.start <= self.end:
            raise ValueError(f"bad span {self.start}..{self.end}")


class ReadError(Exception):
    def __init__(self, message: str, span: SourceSpan | None = None):
        super().__init__(message if span is None else f"{message} at byte {span.start}")
        self.span = span


_WS = frozenset(b" \t\r\n\f\v")
_DELIMS = frozenset(b"()';") | _WS
_LIST, _QUOTED = 0, 1


def _atom_from_token(token: bytes, start: int):
    text = token.decode("ascii", errors="replace")
    if _INT_RE.match(text):
        return int(text)
    if text[0].isdigit():
        raise ReadError(f"malformed number {text!r}", SourceSpan(start, start + len(token)))
    try:
        return Symbol(text)
    except ValueError:
        raise ReadError(f"invalid token {text!r}", SourceSpan(start, start + len(token))) from None


def _read_one(data: bytes, pos: int):
    """Read one expression starting at ``pos``.

    Returns ``(expr, span, next_pos)``, or ``None`` when only whitespace and
    comments remain.
    """
    n = len(data)
    # Frames: [kind, start, items, dot_state, tail]; dot_state 0 = normal,
    # 1 = saw '.', 2 = have tail.
    stack: list = []
    start = None
    while True:
        while pos < n:
            c = data[pos]
            if c in _WS:
                pos += 1
            elif c == 0x3B:  # ';'
                nl = data.find(b"\n", pos)
                pos = n if nl < 0 else nl + 1
            else:
                break
        if pos >= n:
            if stack:
                raise ReadError("unexpected end of input: unbalanced parentheses",
                                SourceSpan(stack[0][1], n))
            return None
        c = data[pos]
        if start is None:
            start = pos
        if c == 0x28:  # '('
            stack.append([_LIST, pos, [], 0, NIL])
            pos += 1
            continue
        if c == 0x27:  # quote
            stack.append([_QUOTED, pos, None, 0, NIL])
            pos += 1
            continue
        if c == 0x29:  # ')'
            if not stack or stack[-1][0] != _LIST:
                raise ReadError("unexpected ')'", SourceSpan(pos, pos + 1))
            frame = stack.pop()
            if frame[3] == 1:
                raise ReadError("missing expression after '.'", SourceSpan(pos, pos + 1))
            value = make_list(frame[2], frame[4])
            pos += 1
        else:
            end = pos
            while end < n and data[end] not in _DELIMS:
                end += 1
            token = data[pos:end]
            if token == b".":
                if not stack or stack[-1][0] != _LIST or not stack[-1][2] or stack[-1][3]:
                    raise ReadError("misplaced '.'", SourceSpan(pos, end))
                stack[-1][3] = 1
                pos = end
                continue
            value = _atom_from_token(token, pos)
            pos = end
        # A complete value: close pending quotes, then hand it to the
        # enclosing list or return it.
        while stack and stack[-1][0] == _QUOTED:
            stack.pop()
            value = Cons(QUOTE, Cons(value, NIL))
        if not stack:
            return value, SourceSpan(start, pos), pos
        frame = stack[-1]
        if frame[3] == 0:
            frame[2].append(value)
        elif frame[3] == 1:
            frame[4] = value
            frame[3] = 2
        else:
            raise ReadError("more than one expression after '.'", SourceSpan(pos - 1, pos))


def _to_bytes(text) -> bytes:
    return text.encode("utf-8") if isinstance(text, str) else bytes(text)


def read(text):
    """Read the first complete expression of ``text``.

    Anything after that expression is ignored; use :func:`read_all` to
    consume a whole file.
    """
    found = _read_one(_to_bytes(text), 0)
    if found is None:
        raise ReadError("empty input")
    return found[0]


def read_spans(text) -> list:
    """Read every expression, returning ``(expr, SourceSpan)`` pairs."""
    data = _to_bytes(text)
    out = []
    pos = 0
    while True:
        found = _read_one(data, pos)
        if found is None:
            return out
        expr, span, pos = found
        out.append((expr, span))


def read_all(text) -> list:
    return [expr for expr, _ in read_spans(text)]


# --- printer ----------------------------------------------------------------

class _Lit:
    __slots__ = ("text",)

    def __init__(self, text):
        self.text = text


_OPEN, _CLOSE, _SPACE, _DOT = _Lit("("), _Lit(")"), _Lit(" "), _Lit(" . ")


def print_expr(expr) -> str:
    """Canonical text of ``expr``: upper-case symbols, no quote sugar."""
    out = []
    stack = [expr]
    while stack:
        x = stack.pop()
        tx = type(x)
        if tx is _Lit:
            out.append(x.text)
        elif tx is Cons:
            items = []
            while type(x) is Cons:
                items.append(x.car)
                x = x.cdr
            stack.append(_CLOSE)
            if x is not NIL:
                stack.append(x)
                stack.append(_DOT)
            for i in range(len(items) - 1, -1, -1):
                stack.append(items[i])
                if i:
                    stack.append(_SPACE)
            stack.append(_OPEN)
        elif tx is Symbol:
            out.append(str.__str__(x))
        elif tx is int:
            out.append(str(x))
        else:
            raise TypeError(f"not an s-expression: {x!r}")
    return "".join(out)
