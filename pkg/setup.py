import os

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python fallback is used at runtime
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("ORTHOFIT_NO_EXT"):
    # -ffp-contract=off: no fused multiply-add, so results match the numpy fallback bit for bit
    ext_modules = cythonize(
        [
            Extension(
                "orthofit._kernels",
                ["src/orthofit/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
