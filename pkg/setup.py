"""Build script for the compiled state-vector kernels.

The package works without the extension (a pure-numpy fallback is selected
at import time), but the compiled core is ~10-50x faster for the
trajectory simulator's per-step gate loop.
"""

import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "miptlab.kernels._core",
        ["src/miptlab/kernels/_core.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3", "-march=native"],
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
