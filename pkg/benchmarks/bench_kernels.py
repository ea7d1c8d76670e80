"""Compare the compiled and pure-Python evaluation kernels.

    python benchmarks/bench_kernels.py [--length 100] [--repeat 5] [--corpus 300]

Two workloads: plain evaluation of a fuzz corpus (many small programs) and
REFLEXION mode on my-last over a long list, where mirroring makes the work
quadratic in the list length.  Reports the best and median time per kernel.
"""

import argparse
import statistics
import sys
import time
from pathlib import Path

from reflexlisp import _backend
from reflexlisp.core import Env, Limits, eval_core
from reflexlisp.errors import EvalError
from reflexlisp.reflexive import Mode, eval_reflexive
from reflexlisp.sexpr import Symbol, make_list, read

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from corpus import corpus  # noqa: E402


def timed(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times), statistics.median(times)


def corpus_workload(programs):
    limits = Limits(1000)

    def go():
        for prog in programs:
            try:
                eval_core(prog, limits=limits)
            except EvalError:
                pass
    return go


def my_last_workload(length):
    env = Env(read((ROOT / "programs" / "my_last_env.lisp").read_text()))
    items = make_list(Symbol(f"E{i}") for i in range(length))
    prog = make_list([Symbol("MY-LAST"), make_list([Symbol("QUOTE"), items])])
    return lambda: eval_reflexive(prog, env, Mode.REFLEXION)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--length", type=int, default=100, help="my-last list length")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--corpus", type=int, default=300, help="fuzz programs to evaluate")
    args = parser.parse_args(argv)

    workloads = [
        (f"eval_core, {args.corpus} fuzz programs", corpus_workload(corpus(args.corpus))),
        (f"REFLEXION my-last, {args.length} elements", my_last_workload(args.length)),
    ]
    previous = _backend.name
    print(f"{'workload':<40} {'kernel':<8} {'best s':>8} {'median s':>9}")
    try:
        for label, fn in workloads:
            results = {}
            for name in sorted(_backend.BACKENDS):
                _backend.use(name)
                results[name] = timed(fn, args.repeat)
                best, median = results[name]
                print(f"{label:<40} {name:<8} {best:8.3f} {median:9.3f}")
            if len(results) == 2:
                print(f"{'':<40} speedup {results['python'][0] / results['cython'][0]:8.1f}x")
    finally:
        _backend.use(previous)
    if "cython" not in _backend.BACKENDS:
        print("compiled kernel not built; only the Python fallback was measured")


if __name__ == "__main__":
    main()
