"""Build script: compiles the optional LCS diff kernel extension.

The package works without the extension (a pure-Python fallback is
selected at import time), so any compilation failure downgrades to a
pure-Python install instead of aborting.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/draftdesk/_kernels/_lcs_cy.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    sys.stderr.write(f"draftdesk: skipping compiled kernel ({exc}); "
                     "using pure-Python fallback\n")

setup(ext_modules=ext_modules)
