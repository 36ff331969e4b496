"""Kernel backend selection.

The compiled extension (`ialearn._kernels._core`, built from Cython) is used
when importable; otherwise the pure-Python module `_pure` provides the same
functions.  Set ``IALEARN_KERNELS=py`` or ``IALEARN_KERNELS=c`` to force a
backend (forcing ``c`` raises if the extension is missing).

Both backends are kept result-identical; see tests/test_kernels.py and
benchmarks/bench_kernels.py.
"""

from __future__ import annotations

import os

from . import _pure

_requested = os.environ.get("IALEARN_KERNELS", "").strip().lower()
if _requested not in ("", "c", "py"):
    raise RuntimeError(f"IALEARN_KERNELS must be 'c' or 'py', got {_requested!r}")

_impl = None
if _requested in ("", "c"):
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _requested == "c":
            raise RuntimeError(
                "IALEARN_KERNELS=c but the compiled kernel module is not available"
            ) from None
if _impl is None:
    _impl = _pure

BACKEND = _impl.BACKEND_NAME

run_word = _impl.run_word
reached_state = _impl.reached_state
product_counterexample = _impl.product_counterexample
refine_partition = _impl.refine_partition


def backends():
    """All importable backend modules, keyed by name (for benchmarks/tests)."""
    found = {_pure.BACKEND_NAME: _pure}
    try:
        from . import _core  # type: ignore[attr-defined]

        found[_core.BACKEND_NAME] = _core
    except ImportError:
        pass
    return found
