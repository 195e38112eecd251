import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "nlmimo._kernels",
                ["src/nlmimo/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level="3",
    )
except ImportError:
    # No Cython available: install pure-Python only, the package falls back
    # to nlmimo._kernels_py at import time.
    extensions = []

setup(ext_modules=extensions)
