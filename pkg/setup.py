"""Build script for the optional compiled kernels.

The Cython extension is built when Cython and numpy are importable at build time; if the
build fails the package still installs and falls back to the pure-Python kernels.
"""
from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension('fuscat._kernels', ['src/fuscat/_kernels.pyx'],
                   include_dirs=[numpy.get_include()],
                   define_macros=[('NPY_NO_DEPRECATED_API', 'NPY_1_7_API_VERSION')])],
        language_level=3, quiet=True)
except ImportError:  # pragma: no cover - build without Cython
    ext_modules = []

setup(ext_modules=ext_modules)
