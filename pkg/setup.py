"""Build script: compiles the optional fast kernels.

The compiled extension is optional. If Cython (or a C compiler) is not
available the package installs anyway and falls back to the pure-Python
kernels in ``minexp._kernels.pycore``.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "minexp._core",
                ["src/minexp/_core.pyx"],
                include_dirs=[np.get_include()],
                # -ffp-contract=off keeps float rounding identical to the
                # pure-Python kernels so both backends pivot the same way.
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
