"""Builds the optional compiled kernel extension.

The package is fully functional without the extension (a numpy fallback is
selected at import); ``optional=True`` keeps installation alive on systems
without a C toolchain.
"""

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "atomcavity.kernels._speedups",
                ["src/atomcavity/kernels/_speedups.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
