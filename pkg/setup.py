"""Build script. The compiled tree kernel is optional: if Cython or a C
compiler is missing the package installs pure-Python and selects the
numpy fallback at import time."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/remitwatch/_kernels/_tree_kernel.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
