"""Build the optional Cython kernels.

The package works without them: ``iltmoments._backend`` falls back to the
numpy implementations in ``iltmoments._fallback`` when the extension is
missing.  To build in place::

    python setup.py build_ext --inplace
"""

import os

import numpy
from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ILTMOMENTS_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "iltmoments._kernels",
                    sources=["src/iltmoments/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "nonecheck": False,
                "language_level": "3",
            },
        )

setup(ext_modules=ext_modules)
