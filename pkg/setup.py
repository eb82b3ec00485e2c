"""Build script: compiles the optional box-elimination kernel.

The compiled kernel is a speedup only; the package falls back to the pure
Python twin in optpack.boxkernel_py if the extension is unavailable.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "optpack._boxkernel",
                ["src/optpack/_boxkernel.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
