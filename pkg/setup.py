"""Build script: compiles the optional Cython kernel.

The package works without the extension (a pure-numpy twin of the solver
is selected at import time), so any build failure here downgrades to a
pure-python install instead of aborting.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "fluidpricing._kernels._fast",
                ["src/fluidpricing/_kernels/_fast.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    import warnings

    warnings.warn(f"building without the compiled kernel: {exc}")

setup(ext_modules=ext_modules)
