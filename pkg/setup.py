"""Build script: compiles the optional Cython enumeration kernel.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compile only costs speed, not functionality.
"""
import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/seqtherm/_kernels.pyx"],
        compiler_directives={"language_level": "3"},
    )
    for ext in ext_modules:
        ext.include_dirs.append(numpy.get_include())
except Exception as exc:  # pragma: no cover - build-env dependent
    print(f"seqtherm: skipping Cython extension ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
