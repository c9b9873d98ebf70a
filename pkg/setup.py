"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a numpy fallback is
selected at import time); building it just makes the hot Monte Carlo loops
faster.  `pip install -e . --no-build-isolation` builds it when Cython and
numpy headers are available.
"""

import os

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    npyrandom_dir = os.path.join(os.path.dirname(numpy.random.__file__), "lib")
    ext_modules = cythonize(
        [
            Extension(
                "ghill._kernels",
                ["src/ghill/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                library_dirs=[npyrandom_dir],
                libraries=["npyrandom"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
