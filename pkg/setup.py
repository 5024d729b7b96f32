"""Build the optional compiled search kernels.

The package works without them: ``filled_groups.kernels`` falls back to the
pure-Python implementation when the extension is missing.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("FILLED_GROUPS_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "filled_groups._native",
                    ["src/filled_groups/_native.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "initializedcheck": False,
            },
        )

setup(ext_modules=ext_modules)
