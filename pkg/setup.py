"""Build script: compiles the optional fast kernels.

The package works without the extension (a pure-Python twin of every kernel
is selected at import time), so a missing compiler or Cython only costs speed.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/qpulba/_kernels.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"qpulba: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
