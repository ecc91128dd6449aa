"""Build script. The compiled kernel is optional: when Cython or a C compiler
is unavailable the package installs pure-Python only and selects the fallback
at import time."""
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "wittvec._speedups",
                ["src/wittvec/_speedups.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
