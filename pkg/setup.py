"""Build script for the optional compiled kernel extension.

The package works without the extension (a pure-Python fallback is selected
at import time), so a failed compile only costs speed, not functionality.
"""

import os

from setuptools import Extension, setup


def build_ext_modules():
    if os.environ.get("IALEARN_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
        import numpy as np
    except Exception:
        return []
    ext = Extension(
        name="ialearn._kernels._core",
        sources=[os.path.join("src", "ialearn", "_kernels", "_core.pyx")],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=build_ext_modules())
