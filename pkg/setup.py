from setuptools import setup, Extension

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("locround._kernel._core", ["src/locround/_kernel/_core.pyx"])],
        language_level=3,
    )
except ImportError:
    # Pure-Python fallback is selected at import time; the wheel still works.
    ext_modules = []

setup(ext_modules=ext_modules)
