"""Builds the optional Cython GRU kernel.

The package is fully functional without the extension: causalsent.nn.kernels
falls back to the numpy implementation when the compiled module is missing,
so a failed build here only costs speed.
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
                "causalsent.nn.kernels._gru_cy",
                ["src/causalsent/nn/kernels/_gru_cy.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level="3",
    )
except Exception as exc:  # pragma: no cover - depends on build host
    sys.stderr.write(f"causalsent: skipping Cython kernel build ({exc}); "
                     "the pure-numpy backend will be used\n")

setup(ext_modules=ext_modules)
