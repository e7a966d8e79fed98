"""Build script: compiles the optional native kernel extension.

The package is fully functional without the extension; faqrank._kernels
falls back to the pure-Python implementations at import time.  Set
FAQRANK_NO_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("FAQRANK_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "faqrank._kernels._native",
                    ["src/faqrank/_kernels/_native.pyx"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
