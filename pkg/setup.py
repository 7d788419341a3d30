"""Build script: compiles the optional C kernel, falling back to pure Python.

The package is fully functional without the extension; fes._kernel picks
the compiled solver when it imports, the Python one otherwise.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/fes/_ckernel.pyx"],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
