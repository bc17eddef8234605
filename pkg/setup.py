"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension; a numpy fallback with
the same interface is selected at import time when the compiled module is
absent. Set DIXTRACE_SKIP_EXT=1 to skip compilation deliberately.
"""

import os

from setuptools import Extension, setup


def _extensions():
    if os.environ.get("DIXTRACE_SKIP_EXT") == "1":
        return []
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "dixtrace._kernels_cy",
        sources=["src/dixtrace/_kernels_cy.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )


setup(ext_modules=_extensions())
