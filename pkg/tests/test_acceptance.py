"""Exit criteria.  Each test carries an ``acceptance`` marker; the terminal
summary prints one PASS/FAIL line per criterion and kernel."""

import random
import time

import pytest

from reflexlisp.cli import read_expected, verify_transcript
from reflexlisp.core import Env, Limits, StepCounter, eval_core
from reflexlisp.errors import EvalError
from reflexlisp.reflexive import Mode, eval_reflexive
from reflexlisp.sexpr import Symbol, make_list, print_expr, read

from corpus import corpus, random_value

pytestmark = pytest.mark.usefixtures("backend")

LIMITS = Limits(1000)
CORPUS_SIZE = 1000
MIN_SUCCESSES = 500


@pytest.fixture(scope="module")
def my_last_env(programs_dir):
    return Env(read((programs_dir / "my_last_env.lisp").read_text()))


@pytest.fixture(scope="module")
def fuzz_corpus():
    # generator depth 6: at most six nested expression constructors
    return corpus(CORPUS_SIZE, seed=20240611, depth=6)


@pytest.fixture
def successes(fuzz_corpus, backend):
    """(program, value, counted eval calls) for every program eval_core finishes."""
    out = []
    for prog in fuzz_corpus:
        counter = StepCounter()
        try:
            value = eval_core(prog, limits=LIMITS, counter=counter)
        except EvalError:
            continue
        out.append((prog, value, counter.count))
    return out


@pytest.mark.acceptance(1, "golden results in all five modes under 1 s")
def test_golden_results(my_last_env):
    cases = [
        (read("a"), Env(read("((a 1))")), 1),
        (read("(car '(a b))"), Env(), Symbol("A")),
        (read("(my-last '(a b c))"), my_last_env, Symbol("C")),
    ]
    start = time.perf_counter()
    for e, a, want in cases:
        for mode in Mode:
            value, _ = eval_reflexive(e, a, mode)
            assert value == want, (print_expr(e), mode.name)
    assert time.perf_counter() - start < 1.0


@pytest.mark.acceptance(2, "golden transcript lines in REFLEXION mode")
def test_golden_traces(programs_dir, my_last_env):
    def check(program, env, golden, n_lines, suffix=False):
        expected = read_expected((programs_dir / golden).read_text())
        assert len(expected) == n_lines
        report = verify_transcript(read((programs_dir / program).read_text()), env, expected,
                                   suffix=suffix)
        assert report.passed, str(report)

    check("atom.lisp", Env(read("((a 1))")), "atom.trace", 1)
    check("car.lisp", Env(), "car.trace", 2)
    check("my_last.lisp", my_last_env, "my_last_tail.trace", 4, suffix=True)


@pytest.mark.acceptance(3, "conservative extension over the fuzz corpus, all modes")
def test_conservative_extension(successes):
    assert len(successes) >= MIN_SUCCESSES
    for prog, want, _ in successes:
        for mode in Mode:
            value, _ = eval_reflexive(prog, None, mode, limits=LIMITS)
            assert value == want, (print_expr(prog), mode.name)


@pytest.mark.acceptance(4, "mirror output equals step output")
def test_mirror_equality(successes):
    divergences = 0
    for prog, _, _ in successes:
        for mode in (Mode.MIRRORING, Mode.AUGMENTATION, Mode.REFLEXION):
            _, trace = eval_reflexive(prog, None, mode, limits=LIMITS)
            divergences += sum(r.mirror_output is None or r.mirror_output != r.output_expr
                               for r in trace)
    assert divergences == 0


@pytest.mark.acceptance(5, "eval call counter equals REFLEXION trace length")
def test_step_count_oracle(successes):
    for prog, _, calls in successes:
        _, trace = eval_reflexive(prog, None, Mode.REFLEXION, limits=LIMITS)
        assert len(trace) == calls, print_expr(prog)


@pytest.mark.acceptance(6, "lower-mode traces are projections of REFLEXION")
def test_mode_projection(successes):
    sample = successes[:50]
    assert len(sample) == 50
    for prog, _, _ in sample:
        _, full = eval_reflexive(prog, None, Mode.REFLEXION, limits=LIMITS)
        for mode in (Mode.TRACING, Mode.MIRRORING, Mode.AUGMENTATION):
            _, lower = eval_reflexive(prog, None, mode, limits=LIMITS)
            assert full.project(mode) == list(lower), (print_expr(prog), mode.name)


@pytest.mark.acceptance(7, "1000 random expressions survive print then read")
def test_round_trip():
    rng = random.Random(1000)
    for _ in range(1000):
        e = random_value(rng)
        assert read(print_expr(e)) == e


@pytest.mark.acceptance(8, "my-last on 100 elements in REFLEXION under 2 s")
def test_desk_scale_performance(my_last_env):
    items = make_list(Symbol(f"E{i}") for i in range(100))
    prog = make_list([Symbol("MY-LAST"), make_list([Symbol("QUOTE"), items])])
    counter = StepCounter()
    assert eval_core(prog, my_last_env, counter=counter) is Symbol("E99")
    # best of three, so a noisy shared machine measures the code, not the noise
    timings = []
    for _ in range(3):
        start = time.perf_counter()
        value, trace = eval_reflexive(prog, my_last_env, Mode.REFLEXION)
        timings.append(time.perf_counter() - start)
        assert value is Symbol("E99")
        assert len(trace) == counter.count
    # Every step is re-run by the mirror, and a step at recursion level k
    # re-runs the remaining 100 - k levels, so mirroring work is quadratic
    # in the list length.  Two seconds still holds at this size.
    assert min(timings) < 2.0, f"best {min(timings):.2f} s"
