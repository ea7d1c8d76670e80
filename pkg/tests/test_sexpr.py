import random

import pytest
from hypothesis import given, strategies as st

from reflexlisp.sexpr import (NIL, QUOTE, Cons, ReadError, SourceSpan, Symbol, iter_list,
                              list_length, make_list, print_expr, read, read_all, read_spans)

from corpus import random_value

A, B, C = Symbol("A"), Symbol("B"), Symbol("C")


def L(*items):
    return make_list(items)


@pytest.mark.parametrize("text, expected", [
    ("'(a b)", L(QUOTE, L(A, B))),
    ("()", NIL),
    ("nil", NIL),
    ("(my-last '(a b c))", L(Symbol("MY-LAST"), L(QUOTE, L(A, B, C)))),
    ("42", 42),
    ("-7", -7),
    ("+3", 3),
    ("(a . b)", Cons(A, B)),
    ("(a . (b))", L(A, B)),
    ("(null. x)", L(Symbol("NULL."), Symbol("X"))),
    ("''a", L(QUOTE, L(QUOTE, A))),
    ("a)", A),
    ("  ; lead\n  (a)", L(A)),
])
def test_read(text, expected):
    assert read(text) == expected


def test_symbols_are_interned_and_upper_case():
    assert Symbol("car") is Symbol("CAR")
    assert print_expr(read("my-last")) == "MY-LAST"


def test_empty_list_is_nil():
    assert read("()") is NIL
    assert make_list([]) is NIL


@pytest.mark.parametrize("text", ["", "   ", "; only a comment", "(a", "((a)", ")", "'",
                                  "(a . )", "(. a)", "(a . b c)", "1a", "(a \"s\")", "(a #b)"])
def test_read_errors(text):
    with pytest.raises(ReadError):
        read(text)


def test_read_error_carries_byte_span():
    # trailing garbage only matters once it is actually read
    assert read("(ok) )") == L(Symbol("OK"))
    with pytest.raises(ReadError) as info:
        read_all("(ok) )")
    assert info.value.span == SourceSpan(5, 6)


@pytest.mark.parametrize("text, expected", [
    ("a b", [A, B]),
    ("", []),
    ("(a) ; c\n(b)", [L(A), L(B)]),
])
def test_read_all(text, expected):
    assert read_all(text) == expected


def test_spans_are_byte_offsets():
    # the comment holds a two-byte character
    spans = [s for _, s in read_spans("; é\n(a b) c")]
    assert spans == [SourceSpan(5, 10), SourceSpan(11, 12)]


@pytest.mark.parametrize("expr, text", [
    (NIL, "NIL"),
    (L(A, L(B, C)), "(A (B C))"),
    (read("(my-last '(a b c))"), "(MY-LAST (QUOTE (A B C)))"),
    (Cons(A, Cons(B, 3)), "(A B . 3)"),
    (L(NIL, L()), "(NIL NIL)"),
])
def test_print(expr, text):
    assert print_expr(expr) == text


def test_print_deep_nesting_without_recursion():
    x = NIL
    for _ in range(50_000):
        x = Cons(x, NIL)
    text = print_expr(x)
    assert text.startswith("((((") and len(text) == 2 * 50_000 + 3
    assert read(text) == x


def test_cons_is_immutable_and_not_a_tuple():
    cell = Cons(A, NIL)
    with pytest.raises(AttributeError):
        cell.car = B
    assert cell != (A, NIL)
    assert hash(Cons(A, NIL)) == hash(L(A))


def test_list_helpers():
    assert list(iter_list(L(A, B))) == [A, B]
    assert list_length(L(A, B, C)) == 3
    assert list_length(Cons(A, B)) == -1
    with pytest.raises(ValueError):
        list(iter_list(Cons(A, B)))


@pytest.mark.parametrize("name", ["", ".", "12", "-5", "a b", "é", "(x"])
def test_invalid_symbol_names(name):
    with pytest.raises(ValueError):
        Symbol(name)


# --- properties -------------------------------------------------------------------

symbols = st.sampled_from(["A", "B", "FOO", "NULL.", "<=", "+", "-", "?!", "X1", "NIL", "A.B"]).map(Symbol)
atoms = st.one_of(symbols, st.integers(-10**6, 10**6))
exprs = st.recursive(
    atoms,
    lambda children: st.one_of(
        st.lists(children, max_size=4).map(make_list),
        st.tuples(st.lists(children, min_size=1, max_size=3), atoms).map(
            lambda p: make_list(p[0], p[1])),
    ),
    max_leaves=30,
)


@given(exprs)
def test_round_trip(e):
    assert read(print_expr(e)) == e


@given(exprs, exprs)
def test_print_is_injective(x, y):
    if x != y:
        assert print_expr(x) != print_expr(y)


@given(exprs)
def test_printed_text_reads_completely(e):
    assert read_all(print_expr(e)) == [e]


def test_round_trip_seeded_sample():
    rng = random.Random(7)
    for _ in range(300):
        e = random_value(rng)
        assert read(print_expr(e)) == e
