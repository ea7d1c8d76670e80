"""Choose the evaluation kernel at import time.

The compiled kernel is preferred.  Set ``REFLEXLISP_BACKEND=python`` to
force the pure-Python one, or call :func:`use` (tests and the benchmark
switch back and forth).
"""

import os

from . import _kernel

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None

BACKENDS = {"python": _kernel.run}
if _ckernel is not None:
    BACKENDS["cython"] = _ckernel.run

name = "cython" if _ckernel is not None else "python"
run = BACKENDS[name]


def use(backend: str) -> None:
    global name, run
    if backend not in BACKENDS:
        raise ValueError(f"backend {backend!r} unavailable; have {sorted(BACKENDS)}")
    name = backend
    run = BACKENDS[backend]


_requested = os.environ.get("REFLEXLISP_BACKEND")
if _requested:
    use(_requested)
