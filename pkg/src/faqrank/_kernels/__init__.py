"""Kernel backend selection.

The compiled extension is preferred when importable; otherwise the pure
Python twins take over.  Setting FAQRANK_PURE_PYTHON=1 forces the fallback
(useful for the backend-parity tests and the benchmark).  Both backends
produce bit-identical output by construction.
"""

import os

from faqrank._kernels import _pure

if os.environ.get("FAQRANK_PURE_PYTHON") == "1":
    _impl = _pure
else:
    try:
        from faqrank._kernels import _native as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

bm25_accumulate = _impl.bm25_accumulate
positive_indices = _impl.positive_indices
dot = _impl.dot
matvec = _impl.matvec
lcs_length = _impl.lcs_length


def kernel_backend() -> str:
    """Name of the active kernel backend: "native" or "python"."""
    return "python" if _impl is _pure else "native"
