"""The compiled and pure-Python kernels must be indistinguishable."""

import random

import pytest

from reflexlisp import _backend, _kernel
from reflexlisp.core import StepCounter
from reflexlisp.errors import EvalError
from reflexlisp.sexpr import NIL, Cons, Symbol, read

from corpus import corpus

needs_both = pytest.mark.skipif(len(_backend.BACKENDS) < 2, reason="compiled kernel not built")


def outcome(run, e, a=read("()"), max_depth=1000):
    entered, exited = StepCounter(), []
    try:
        value = run(e, a, max_depth, entered, lambda *step: exited.append(step))
    except EvalError as exc:
        return ("error", exc.kind, exc.step, exc.expr, entered.count, exited)
    return ("ok", value, entered.count, exited)


def test_fallback_is_always_available():
    assert "python" in _backend.BACKENDS
    with pytest.raises(ValueError):
        _backend.use("fortran")


@needs_both
def test_kernels_agree_on_corpus():
    py, cy = _backend.BACKENDS["python"], _backend.BACKENDS["cython"]
    for prog in corpus(400, seed=7):
        assert outcome(py, prog) == outcome(cy, prog)


@needs_both
@pytest.mark.parametrize("text, env", [
    ("(my-last '(a b c d e))",
     "((my-last (label my-last (lambda (x) (cond ((eq (cdr x) nil) (car x)) ('t (my-last (cdr x))))))))"),
    ("((lambda (x y) (cons y x)) 'a)", "()"),
    ("(cond ('t))", "()"),
    ("b", "((a 1) . zz)"),
    ("b", "(zz (b 2))"),
    ("((label f (lambda (x) (f x))) 'a)", "()"),
])
def test_kernels_agree_on_edge_cases(text, env):
    e, a = read(text), read(env)
    assert outcome(_backend.BACKENDS["python"], e, a, 300) == outcome(_backend.BACKENDS["cython"], e, a, 300)


def test_lookup_memo_matches_plain_lookup():
    # environments that share tails, some malformed, queried in random order
    rng = random.Random(11)
    keys = [Symbol(s) for s in "ABCD"] + [NIL, 1, 2]
    envs = [NIL]
    for _ in range(300):
        tail = rng.choice(envs)
        r = rng.random()
        if r < 0.8:
            binding = Cons(rng.choice(keys), Cons(rng.choice(keys), NIL))
        elif r < 0.9:
            binding = Cons(rng.choice(keys), rng.choice(keys))
        else:
            binding = rng.choice(keys)
        envs.append(Cons(binding, tail))
    envs.append(Cons(Cons(Symbol("A"), Cons(1, NIL)), Symbol("ZZ")))
    memo = {}
    for _ in range(3000):
        x, a = rng.choice(keys), rng.choice(envs)
        assert _kernel._lookup_memo(x, a, memo) is _kernel.lookup(x, a)
