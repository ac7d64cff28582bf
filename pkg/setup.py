from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Pure-Python fallback in koszulity._kernels_py is selected at import time.
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("koszulity._kernels", ["src/koszulity/_kernels.pyx"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
