"""Build script: compiles the optional C++ kernel extension when Cython is available.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so any build problem here should degrade gracefully
to a pure-Python install.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "hypervote._ckernels",
                ["src/hypervote/_ckernels.pyx"],
                language="c++",
                extra_compile_args=["-O3"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
