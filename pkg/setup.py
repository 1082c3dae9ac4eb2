"""Build script: compiles the optional split-scan extension.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compile downgrades to a pure build instead of
aborting the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "pupilmood.learn._split_cy",
                ["src/pupilmood/learn/_split_cy.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                # keep float ops bit-identical to the numpy fallback
                extra_compile_args=["-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    print(f"pupilmood: skipping compiled kernel ({exc}); pure fallback will be used", file=sys.stderr)

setup(ext_modules=ext_modules)
