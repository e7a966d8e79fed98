"""Deterministic FAQ retrieval and evaluation toolkit.

Everything in this package is a pure function of its inputs plus explicit
seeds: same files and flags in, byte-identical results out.
"""

__version__ = "0.1.0"

from faqrank._kernels import kernel_backend

__all__ = ["kernel_backend", "__version__"]
